//! Conflict-driven nogood search.
//!
//! Nogoods are stored as the clauses of their negated literals and watched
//! with two literals each. Conflict analysis learns the first-UIP clause and
//! backjumps to the second-highest level in it. Decisions pick the unassigned
//! decision variable of highest activity (lowest index on ties) and assign it
//! false. There are no restarts.

use std::ops::Not;

/// A variable with a sign. In a nogood, `Lit::new(v, true)` stands for
/// "v is true".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Lit(u32);

impl Lit {
    pub(crate) fn new(var: u32, positive: bool) -> Self {
        Lit(var << 1 | u32::from(!positive))
    }

    pub(crate) fn var(self) -> u32 {
        self.0 >> 1
    }

    pub(crate) fn positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

/// Hook consulted at every propagation fixpoint.
pub(crate) trait Theory {
    type Error;

    /// Returns nogoods to add. On a complete assignment an empty answer
    /// accepts the assignment and every returned nogood must be violated by
    /// it.
    fn check(&mut self, engine: &Engine, complete: bool) -> Result<Vec<Vec<Lit>>, Self::Error>;
}

const DECAY: f64 = 0.95;

#[derive(Debug)]
pub(crate) struct Engine {
    values: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    decidable: Vec<bool>,
    activity: Vec<f64>,
    var_inc: f64,
    seen: Vec<bool>,
    /// Literals made true, in assignment order.
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    clauses: Vec<Vec<Lit>>,
    /// Clauses indexed by the clause literal they watch.
    watches: Vec<Vec<u32>>,
    unsat: bool,
    pub(crate) decisions: u64,
    pub(crate) conflicts: u64,
}

impl Engine {
    /// An engine over `num_vars` variables, all of them decision variables.
    pub(crate) fn new(num_vars: u32) -> Self {
        let n = num_vars as usize;
        Self {
            values: vec![None; n],
            level: vec![0; n],
            reason: vec![None; n],
            decidable: vec![true; n],
            activity: vec![0.0; n],
            var_inc: 1.0,
            seen: vec![false; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            unsat: false,
            decisions: 0,
            conflicts: 0,
        }
    }

    /// Excludes `var` from decisions; it is then only set by propagation
    /// unless nothing else is left.
    pub(crate) fn set_decidable(&mut self, var: u32, decidable: bool) {
        self.decidable[var as usize] = decidable;
    }

    pub(crate) fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub(crate) fn value(&self, var: u32) -> Option<bool> {
        self.values[var as usize]
    }

    fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.values[lit.var() as usize].map(|v| v == lit.positive())
    }

    pub(crate) fn level_of(&self, var: u32) -> u32 {
        self.level[var as usize]
    }

    pub(crate) fn current_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.trail.len() == self.values.len()
    }

    #[cfg(test)]
    pub(crate) fn is_unsat(&self) -> bool {
        self.unsat
    }

    #[cfg(test)]
    pub(crate) fn activity(&self, var: u32) -> f64 {
        self.activity[var as usize]
    }

    fn assign(&mut self, lit: Lit, reason: Option<u32>) {
        let v = lit.var() as usize;
        debug_assert!(self.values[v].is_none());
        self.values[v] = Some(lit.positive());
        self.level[v] = self.current_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    pub(crate) fn backtrack(&mut self, level: u32) {
        if self.current_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for lit in self.trail.drain(start..) {
            self.values[lit.var() as usize] = None;
            self.reason[lit.var() as usize] = None;
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn attach(&mut self, clause: Vec<Lit>) -> u32 {
        let idx = self.clauses.len() as u32;
        debug_assert!(clause.len() >= 2);
        self.watches[clause[0].code()].push(idx);
        self.watches[clause[1].code()].push(idx);
        self.clauses.push(clause);
        idx
    }

    /// Unit propagation to a fixpoint. Returns the index of a violated
    /// clause on conflict.
    pub(crate) fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let falsified = !self.trail[self.qhead];
            self.qhead += 1;
            let mut ws = std::mem::take(&mut self.watches[falsified.code()]);
            let mut kept = 0;
            let mut conflict = None;
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let c = &mut self.clauses[ci as usize];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let other = c[0];
                let values = &self.values;
                let value = |l: Lit| values[l.var() as usize].map(|v| v == l.positive());
                if value(other) == Some(true) {
                    ws[kept] = ci;
                    kept += 1;
                    continue;
                }
                if let Some(k) = (2..c.len()).find(|&k| value(c[k]) != Some(false)) {
                    c.swap(1, k);
                    let w = c[1].code();
                    self.watches[w].push(ci);
                    continue;
                }
                ws[kept] = ci;
                kept += 1;
                if value(other) == Some(false) {
                    conflict = Some(ci);
                    break;
                }
                self.assign(other, Some(ci));
            }
            while i < ws.len() {
                ws[kept] = ws[i];
                kept += 1;
                i += 1;
            }
            ws.truncate(kept);
            self.watches[falsified.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, var: u32) {
        let a = &mut self.activity[var as usize];
        *a += self.var_inc;
        if *a > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
    }

    /// First-UIP learning. Returns the learned clause, asserting literal
    /// first, and the backjump level. Requires a conflict above level 0.
    pub(crate) fn analyze(&mut self, conflict: u32) -> (Vec<Lit>, u32) {
        let current = self.current_level();
        debug_assert!(current > 0);
        let mut learned = vec![Lit(0)];
        let mut pending = 0usize;
        let mut clause = conflict;
        let mut resolved: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            for k in 0..self.clauses[clause as usize].len() {
                let q = self.clauses[clause as usize][k];
                let v = q.var();
                if resolved.is_some_and(|p| p.var() == v) {
                    continue;
                }
                if !self.seen[v as usize] && self.level[v as usize] > 0 {
                    self.seen[v as usize] = true;
                    self.bump(v);
                    if self.level[v as usize] >= current {
                        pending += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            let p = loop {
                idx -= 1;
                let p = self.trail[idx];
                if self.seen[p.var() as usize] {
                    break p;
                }
            };
            self.seen[p.var() as usize] = false;
            pending -= 1;
            if pending == 0 {
                learned[0] = !p;
                break;
            }
            resolved = Some(p);
            clause = self.reason[p.var() as usize].expect("implied literal has a reason");
        }
        for l in &learned[1..] {
            self.seen[l.var() as usize] = false;
        }
        let mut backjump = 0;
        if learned.len() > 1 {
            let (k, lvl) = learned[1..]
                .iter()
                .enumerate()
                .map(|(k, l)| (k + 1, self.level[l.var() as usize]))
                .max_by_key(|&(k, lvl)| (lvl, std::cmp::Reverse(k)))
                .unwrap();
            learned.swap(1, k);
            backjump = lvl;
        }
        (learned, backjump)
    }

    /// Learns from `conflict` and asserts the learned clause. Returns false
    /// when the conflict is at level 0.
    pub(crate) fn resolve_conflict(&mut self, conflict: u32) -> bool {
        self.conflicts += 1;
        if self.current_level() == 0 {
            self.unsat = true;
            return false;
        }
        let (learned, backjump) = self.analyze(conflict);
        self.backtrack(backjump);
        let asserting = learned[0];
        if learned.len() == 1 {
            self.assign(asserting, None);
        } else {
            let idx = self.attach(learned);
            self.assign(asserting, Some(idx));
        }
        self.var_inc /= DECAY;
        true
    }

    /// Adds a nogood at any point of the search. A nogood violated by the
    /// current assignment is resolved as a conflict; a unit one is asserted
    /// after backjumping to where it became unit. Returns false iff the
    /// store became unsatisfiable.
    pub(crate) fn add_nogood(&mut self, nogood: &[Lit]) -> bool {
        if self.unsat {
            return false;
        }
        let mut clause: Vec<Lit> = nogood.iter().map(|&l| !l).collect();
        clause.sort();
        clause.dedup();
        if clause.windows(2).any(|w| w[0].var() == w[1].var()) {
            // Contains some atom with both signs; can never be violated.
            return true;
        }
        let fixed = |e: &Self, l: Lit| {
            e.values[l.var() as usize].is_some() && e.level[l.var() as usize] == 0
        };
        if clause
            .iter()
            .any(|&l| fixed(self, l) && self.lit_value(l) == Some(true))
        {
            return true;
        }
        clause.retain(|&l| !(fixed(self, l) && self.lit_value(l) == Some(false)));
        match clause.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.backtrack(0);
                self.assign(clause[0], None);
                true
            }
            _ => {
                let rank = |l: Lit| {
                    let lvl = self.level[l.var() as usize];
                    match self.lit_value(l) {
                        Some(true) => (0, lvl),
                        None => (1, 0),
                        Some(false) => (2, u32::MAX - lvl),
                    }
                };
                clause.sort_by_key(|&l| rank(l));
                let (first, second) = (clause[0], clause[1]);
                match (self.lit_value(first), self.lit_value(second)) {
                    (Some(false), _) => {
                        self.backtrack(self.level_of(first.var()));
                        let idx = self.attach(clause);
                        self.resolve_conflict(idx)
                    }
                    (None, Some(false)) => {
                        self.backtrack(self.level_of(second.var()));
                        let idx = self.attach(clause);
                        self.assign(first, Some(idx));
                        true
                    }
                    _ => {
                        self.attach(clause);
                        true
                    }
                }
            }
        }
    }

    /// Assigns the chosen decision variable false at a new level. Returns
    /// false when every variable is assigned.
    pub(crate) fn decide(&mut self) -> bool {
        let mut best: Option<u32> = None;
        for v in 0..self.num_vars() {
            let i = v as usize;
            if self.values[i].is_some() || !self.decidable[i] {
                continue;
            }
            if best.is_none_or(|b| self.activity[i] > self.activity[b as usize]) {
                best = Some(v);
            }
        }
        let var = match best {
            Some(v) => v,
            None => match (0..self.num_vars()).find(|&v| self.values[v as usize].is_none()) {
                Some(v) => v,
                None => return false,
            },
        };
        self.trail_lim.push(self.trail.len());
        self.decisions += 1;
        self.assign(Lit::new(var, false), None);
        true
    }

    /// Runs the search until an assignment is accepted by `theory` (true)
    /// or the store is unsatisfiable (false). Call again after blocking the
    /// accepted assignment to continue enumeration.
    pub(crate) fn search<T: Theory>(&mut self, theory: &mut T) -> Result<bool, T::Error> {
        loop {
            if self.unsat {
                return Ok(false);
            }
            if let Some(conflict) = self.propagate() {
                if !self.resolve_conflict(conflict) {
                    return Ok(false);
                }
                continue;
            }
            let complete = self.is_complete();
            let nogoods = theory.check(self, complete)?;
            if !nogoods.is_empty() {
                for ng in &nogoods {
                    if !self.add_nogood(ng) {
                        return Ok(false);
                    }
                }
                continue;
            }
            if complete {
                return Ok(true);
            }
            self.decide();
        }
    }
}
