//! Conflict-driven clause-learning SAT solver: two watched literals,
//! first-UIP learning with recursive minimization, VSIDS branching with phase
//! saving, Luby restarts and LBD-based learnt clause reduction.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encoder::{CnfFormula, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Lit(u32);

impl Lit {
    fn new(var: usize, negated: bool) -> Self {
        Lit((var as u32) << 1 | negated as u32)
    }

    fn from_literal(l: Literal) -> Self {
        Lit::new(l.var as usize - 1, !l.positive)
    }

    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn negated(self) -> bool {
        self.0 & 1 == 1
    }

    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

#[derive(Clone, Copy, Debug)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

#[derive(Clone, Debug, Default)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
    pub learnt_literals: u64,
    pub deleted_clauses: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CdclOutcome {
    /// Values for variables `1..=n` (index `var - 1`).
    Sat(Vec<bool>),
    Unsat,
    /// Deadline or conflict budget exhausted.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct CdclOptions {
    pub seed: u64,
    pub deadline: Option<Instant>,
    pub conflict_budget: Option<u64>,
    pub random_decision_freq: f64,
    pub restart_base: u64,
}

impl Default for CdclOptions {
    fn default() -> Self {
        Self { seed: 0, deadline: None, conflict_budget: None, random_decision_freq: 0.005, restart_base: 100 }
    }
}

/// Max-heap of variables keyed by activity.
#[derive(Clone, Debug, Default)]
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.sift_up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("nonempty");
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent]] >= act[v] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && act[self.heap[r]] > act[self.heap[l]] { r } else { l };
            if act[self.heap[child]] <= act[v] {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

fn luby(mut i: u64) -> u64 {
    // i-th element (0-based) of 1,1,2,1,1,2,4,...
    let (mut size, mut seq) = (1u64, 0u32);
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

pub struct Cdcl {
    num_vars: usize,
    clauses: Vec<ClauseData>,
    free_slots: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    phase: Vec<bool>,
    heap: VarHeap,
    seen: Vec<bool>,
    analyze_stack: Vec<Lit>,
    analyze_clear: Vec<Lit>,
    level_stamp: Vec<u64>,
    stamp: u64,
    learnt_refs: Vec<u32>,
    ok: bool,
    rng: ChaCha8Rng,
    opts: CdclOptions,
    stats: SolverStats,
}

impl Cdcl {
    pub fn new(formula: &CnfFormula, opts: CdclOptions) -> Self {
        let n = formula.variable_count() as usize;
        let mut s = Cdcl {
            num_vars: n,
            clauses: Vec::with_capacity(formula.len()),
            free_slots: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            cla_inc: 1.0,
            phase: vec![false; n],
            heap: VarHeap { heap: Vec::with_capacity(n), pos: vec![None; n] },
            seen: vec![false; n],
            analyze_stack: Vec::new(),
            analyze_clear: Vec::new(),
            level_stamp: vec![0; n + 1],
            stamp: 0,
            learnt_refs: Vec::new(),
            ok: true,
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            opts,
            stats: SolverStats::default(),
        };
        for v in 0..n {
            s.heap.insert(v, &s.activity);
        }
        for c in formula.clauses() {
            if !s.add_input_clause(c) {
                s.ok = false;
                break;
            }
        }
        s
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    fn value(&self, l: Lit) -> i8 {
        let a = self.assigns[l.var()];
        if l.negated() {
            -a
        } else {
            a
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn add_input_clause(&mut self, clause: &[Literal]) -> bool {
        let mut lits: Vec<Lit> = clause.iter().map(|&l| Lit::from_literal(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        lits.retain(|&l| self.value(l) != FALSE);
        if lits.iter().any(|&l| self.value(l) == TRUE) {
            return true;
        }
        match lits.len() {
            0 => false,
            1 => {
                self.enqueue(lits[0], None);
                self.propagate().is_none()
            }
            _ => {
                self.attach(lits, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> u32 {
        let (l0, l1) = (lits[0], lits[1]);
        let data = ClauseData { lits, learnt, deleted: false, lbd, activity: 0.0 };
        let cref = match self.free_slots.pop() {
            Some(slot) => {
                self.clauses[slot as usize] = data;
                slot
            }
            None => {
                self.clauses.push(data);
                (self.clauses.len() - 1) as u32
            }
        };
        self.watches[(!l0).idx()].push(Watcher { cref, blocker: l1 });
        self.watches[(!l1).idx()].push(Watcher { cref, blocker: l0 });
        if learnt {
            self.learnt_refs.push(cref);
        }
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        let v = l.var();
        self.assigns[v] = if l.negated() { FALSE } else { TRUE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.idx()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                let lits = &mut self.clauses[cref].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let nw = Watcher { cref: w.cref, blocker: first };
                let first_val = {
                    let a = self.assigns[first.var()];
                    if first.negated() {
                        -a
                    } else {
                        a
                    }
                };
                if first != w.blocker && first_val == TRUE {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    let l = lits[k];
                    let a = self.assigns[l.var()];
                    let val = if l.negated() { -a } else { a };
                    if val != FALSE {
                        lits.swap(1, k);
                        self.watches[(!l).idx()].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if first_val == FALSE {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[p.idx()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &r in &self.learnt_refs {
                self.clauses[r as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn abstract_level(&self, v: usize) -> u32 {
        1 << (self.level[v] & 31)
    }

    /// Whether `p` is implied by literals already in the learnt clause.
    fn lit_redundant(&mut self, p: Lit, abstract_levels: u32) -> bool {
        self.analyze_stack.clear();
        self.analyze_stack.push(p);
        let top = self.analyze_clear.len();
        while let Some(q) = self.analyze_stack.pop() {
            let r = self.reason[q.var()].expect("redundancy check on implied literal") as usize;
            for k in 1..self.clauses[r].lits.len() {
                let l = self.clauses[r].lits[k];
                let v = l.var();
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v].is_some() && self.abstract_level(v) & abstract_levels != 0 {
                    self.seen[v] = true;
                    self.analyze_stack.push(l);
                    self.analyze_clear.push(l);
                } else {
                    for l in self.analyze_clear.drain(top..) {
                        self.seen[l.var()] = false;
                    }
                    return false;
                }
            }
        }
        true
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path_c = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let dl = self.decision_level();
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl as usize].lits.len() {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= dl {
                        path_c += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var()] {
                    break;
                }
            }
            let next = self.trail[index];
            self.seen[next.var()] = false;
            path_c -= 1;
            p = Some(next);
            if path_c == 0 {
                break;
            }
            confl = self.reason[next.var()].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("conflict at positive level");

        self.analyze_clear.clear();
        self.analyze_clear.extend_from_slice(&learnt);
        let abstract_levels = learnt[1..].iter().fold(0, |acc, l| acc | self.abstract_level(l.var()));
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            if self.reason[l.var()].is_none() || !self.lit_redundant(l, abstract_levels) {
                kept.push(l);
            }
        }
        for &l in &self.analyze_clear {
            self.seen[l.var()] = false;
        }
        for &l in &learnt {
            self.seen[l.var()] = false;
        }
        let mut learnt = kept;

        let bt = if learnt.len() == 1 {
            0
        } else {
            let max_i = (1..learnt.len()).max_by_key(|&i| self.level[learnt[i].var()]).expect("nonempty");
            learnt.swap(1, max_i);
            self.level[learnt[1].var()]
        };
        self.stamp += 1;
        let mut lbd = 0;
        for l in &learnt {
            let lv = self.level[l.var()] as usize;
            if self.level_stamp[lv] != self.stamp {
                self.level_stamp[lv] = self.stamp;
                lbd += 1;
            }
        }
        (learnt, bt, lbd)
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var();
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.phase[v] = !l.negated();
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        if self.opts.random_decision_freq > 0.0 && self.rng.gen::<f64>() < self.opts.random_decision_freq && !self.heap.is_empty() {
            let v = self.heap.heap[self.rng.gen_range(0..self.heap.heap.len())];
            if self.assigns[v] == UNDEF {
                return Some(Lit::new(v, !self.phase[v]));
            }
        }
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                return Some(Lit::new(v, !self.phase[v]));
            }
        }
        None
    }

    fn locked(&self, cref: u32) -> bool {
        let c = &self.clauses[cref as usize];
        let l0 = c.lits[0];
        self.value(l0) == TRUE && self.reason[l0.var()] == Some(cref)
    }

    fn reduce_db(&mut self) {
        let mut refs = std::mem::take(&mut self.learnt_refs);
        refs.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.partial_cmp(&cb.activity).unwrap_or(std::cmp::Ordering::Equal))
        });
        let half = refs.len() / 2;
        let mut keep = Vec::with_capacity(refs.len());
        let mut removed = Vec::new();
        for (i, &r) in refs.iter().enumerate() {
            let c = &self.clauses[r as usize];
            if i < half && c.lbd > 2 && c.lits.len() > 2 && !self.locked(r) {
                let c = &mut self.clauses[r as usize];
                c.deleted = true;
                c.lits = Vec::new();
                removed.push(r);
            } else {
                keep.push(r);
            }
        }
        self.stats.deleted_clauses += removed.len() as u64;
        for ws in &mut self.watches {
            ws.retain(|w| !self.clauses[w.cref as usize].deleted);
        }
        self.free_slots.extend(removed);
        self.learnt_refs = keep;
    }

    fn out_of_budget(&self) -> bool {
        if let Some(b) = self.opts.conflict_budget {
            if self.stats.conflicts >= b {
                return true;
            }
        }
        matches!(self.opts.deadline, Some(d) if Instant::now() >= d)
    }

    pub fn solve(&mut self) -> CdclOutcome {
        if !self.ok {
            return CdclOutcome::Unsat;
        }
        if self.propagate().is_some() {
            self.ok = false;
            return CdclOutcome::Unsat;
        }
        let mut next_reduce = 2000u64;
        let mut reduce_inc = 300u64;
        let mut restart_idx = 0u64;
        loop {
            let limit = luby(restart_idx) * self.opts.restart_base;
            let mut conflicts_here = 0u64;
            loop {
                if let Some(confl) = self.propagate() {
                    self.stats.conflicts += 1;
                    conflicts_here += 1;
                    if self.decision_level() == 0 {
                        self.ok = false;
                        return CdclOutcome::Unsat;
                    }
                    let (learnt, bt, lbd) = self.analyze(confl);
                    self.cancel_until(bt);
                    self.stats.learnt_literals += learnt.len() as u64;
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], None);
                    } else {
                        let l0 = learnt[0];
                        let cref = self.attach(learnt, true, lbd);
                        self.bump_clause(cref);
                        self.enqueue(l0, Some(cref));
                        self.stats.learnt_clauses += 1;
                    }
                    self.var_inc /= 0.95;
                    self.cla_inc /= 0.999;
                    if self.stats.conflicts % 256 == 0 && self.out_of_budget() {
                        self.cancel_until(0);
                        return CdclOutcome::Unknown;
                    }
                } else {
                    if conflicts_here >= limit {
                        self.stats.restarts += 1;
                        restart_idx += 1;
                        self.cancel_until(0);
                        break;
                    }
                    if self.stats.conflicts >= next_reduce {
                        next_reduce = self.stats.conflicts + 2000 + reduce_inc;
                        reduce_inc += 300;
                        self.reduce_db();
                    }
                    match self.pick_branch() {
                        None => {
                            let model = (0..self.num_vars).map(|v| self.assigns[v] == TRUE).collect();
                            self.cancel_until(0);
                            return CdclOutcome::Sat(model);
                        }
                        Some(l) => {
                            self.stats.decisions += 1;
                            if self.stats.decisions % 4096 == 0 && self.out_of_budget() {
                                self.cancel_until(0);
                                return CdclOutcome::Unknown;
                            }
                            self.trail_lim.push(self.trail.len());
                            self.enqueue(l, None);
                        }
                    }
                }
            }
        }
    }
}
