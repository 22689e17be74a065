//! Propagation loops over fixed BLPs: SBLP, the CBLP fixpoint, and CLAP.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::relaxations::{Fixing, RelaxError, Skeleton};
use crate::structures::RelationalStructure;

/// `(symbol, constraint, assignment)`.
pub type Triple = (usize, usize, usize);

/// Surviving assignments `S_{x,R}` per constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SMap {
    alive: Vec<Vec<Vec<bool>>>,
}

impl SMap {
    /// Every `S_{x,R} = R^A`.
    pub fn full(sk: &Skeleton) -> Self {
        let (x, a) = (sk.x(), sk.a());
        let alive = (0..x.signature().len())
            .map(|s| vec![vec![true; a.relation(s).len()]; x.relation(s).len()])
            .collect();
        SMap { alive }
    }

    pub fn contains(&self, (s, c, a): Triple) -> bool {
        self.alive[s][c][a]
    }

    pub fn remove(&mut self, (s, c, a): Triple) {
        self.alive[s][c][a] = false;
    }

    pub fn set(&self, symbol: usize, constraint: usize) -> Vec<usize> {
        (0..self.alive[symbol][constraint].len())
            .filter(|&a| self.alive[symbol][constraint][a])
            .collect()
    }

    pub fn any_empty(&self) -> bool {
        self.alive.iter().flatten().any(|s| !s.contains(&true))
    }

    pub fn first_empty(&self) -> Option<(usize, usize)> {
        self.alive.iter().enumerate().find_map(|(s, rel)| {
            rel.iter().position(|set| !set.contains(&true)).map(|c| (s, c))
        })
    }

    /// Triples in lexicographic order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.alive.iter().enumerate().flat_map(|(s, rel)| {
            rel.iter()
                .enumerate()
                .flat_map(move |(c, set)| (0..set.len()).map(move |a| (s, c, a)))
        })
    }

    pub fn alive_triples(&self) -> Vec<Triple> {
        self.triples().filter(|&t| self.contains(t)).collect()
    }

    pub fn removed_fixings(&self) -> Vec<Fixing> {
        self.triples()
            .filter(|&t| !self.contains(t))
            .map(|(s, c, a)| Fixing::zero(s, c, a))
            .collect()
    }

    fn clear(&mut self) {
        for v in self.alive.iter_mut().flatten().flatten() {
            *v = false;
        }
    }

    /// One `S <R> <constraint> : <assignments>` line per constraint.
    pub fn serialize(&self, symbol_name: impl Fn(usize) -> String) -> String {
        let mut out = String::new();
        for (s, rel) in self.alive.iter().enumerate() {
            for c in 0..rel.len() {
                let set: Vec<String> = self.set(s, c).iter().map(usize::to_string).collect();
                let _ = writeln!(out, "S {} {} : {}", symbol_name(s), c, set.join(" "));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Some `S_{x,R}` became empty.
    Propagation,
    /// No surviving pair passed BLP+AIP.
    Certification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Remove { symbol: usize, constraint: usize, assignment: usize, sweep: usize },
    Cert { symbol: usize, constraint: usize, assignment: usize },
    Reject { stage: Stage },
}

impl TraceEvent {
    pub fn render(&self, symbol_name: impl Fn(usize) -> String) -> String {
        match self {
            TraceEvent::Remove { symbol, constraint, assignment, sweep } => {
                format!("REMOVE {} {} {} sweep={}", symbol_name(*symbol), constraint, assignment, sweep)
            }
            TraceEvent::Cert { symbol, constraint, assignment } => {
                format!("CERT {} {} {}", symbol_name(*symbol), constraint, assignment)
            }
            TraceEvent::Reject { stage: Stage::Propagation } => "REJECT stage=propagation".into(),
            TraceEvent::Reject { stage: Stage::Certification } => "REJECT stage=certification".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "ACCEPT",
            Verdict::Reject => "REJECT",
        })
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub verdict: Verdict,
    pub trace: Vec<TraceEvent>,
    pub smap: SMap,
    pub blp_calls: usize,
    pub aip_calls: usize,
}

impl Decision {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    pub fn render_trace(&self, symbol_name: impl Fn(usize) -> String + Copy) -> String {
        self.trace.iter().map(|e| e.render(symbol_name) + "\n").collect()
    }
}

/// How the fixpoint sweeps are scheduled.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum SweepMode {
    /// Lexicographic order, removals visible immediately.
    #[default]
    Sequential,
    /// Sequential in the given order, which must list every triple once.
    Ordered(Vec<Triple>),
    /// All tests of a sweep against a frozen snapshot, run in parallel,
    /// removals applied at sweep end.
    Jacobi,
}

fn removal_test(sk: &Skeleton, smap: &SMap, t: Triple) -> Result<bool, RelaxError> {
    let mut fixings = smap.removed_fixings();
    fixings.push(Fixing::one(t.0, t.1, t.2));
    Ok(!sk.blp_feasible(&fixings)?)
}

/// Greatest fixpoint of the removal rule, with the removal trace. Once a set
/// is empty every fixed BLP is infeasible, so the fixpoint is all-empty and
/// is returned without further solves.
pub fn cblp_run(sk: &Skeleton, mode: &SweepMode) -> Result<(SMap, Vec<TraceEvent>), RelaxError> {
    let mut smap = SMap::full(sk);
    let mut trace = Vec::new();
    let lex: Vec<Triple>;
    let order: &[Triple] = match mode {
        SweepMode::Ordered(o) => {
            debug_assert_eq!(o.len(), smap.triples().count());
            o
        }
        _ => {
            lex = smap.triples().collect();
            &lex
        }
    };
    let mut sweep = 0;
    loop {
        sweep += 1;
        let mut changed = false;
        if *mode == SweepMode::Jacobi {
            let candidates: Vec<Triple> = smap.alive_triples();
            let failing: Vec<Triple> = candidates
                .par_iter()
                .map(|&t| removal_test(sk, &smap, t).map(|bad| bad.then_some(t)))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .flatten()
                .collect();
            for t in failing {
                smap.remove(t);
                trace.push(TraceEvent::Remove { symbol: t.0, constraint: t.1, assignment: t.2, sweep });
                changed = true;
            }
        } else {
            for &t in order {
                if !smap.contains(t) {
                    continue;
                }
                if removal_test(sk, &smap, t)? {
                    smap.remove(t);
                    trace.push(TraceEvent::Remove { symbol: t.0, constraint: t.1, assignment: t.2, sweep });
                    changed = true;
                    if smap.any_empty() {
                        break;
                    }
                }
            }
        }
        if smap.any_empty() {
            smap.clear();
            return Ok((smap, trace));
        }
        if !changed {
            return Ok((smap, trace));
        }
    }
}

pub fn cblp_fixpoint(x: &RelationalStructure, a: &RelationalStructure) -> Result<SMap, RelaxError> {
    let sk = Skeleton::new(x, a)?;
    Ok(cblp_run(&sk, &SweepMode::Sequential)?.0)
}

/// Full CLAP on a prepared skeleton.
pub fn clap_run(sk: &Skeleton, mode: &SweepMode) -> Result<Decision, RelaxError> {
    let (smap, mut trace) = cblp_run(sk, mode)?;
    let finish = |verdict, trace, smap| Decision {
        verdict,
        trace,
        smap,
        blp_calls: sk.counters().blp_calls(),
        aip_calls: sk.counters().aip_calls(),
    };
    if smap.any_empty() {
        trace.push(TraceEvent::Reject { stage: Stage::Propagation });
        return Ok(finish(Verdict::Reject, trace, smap));
    }
    let alive = smap.alive_triples();
    if alive.is_empty() {
        // no constraints at all
        return Ok(finish(Verdict::Accept, trace, smap));
    }
    let removed = smap.removed_fixings();
    for (s, c, a) in alive {
        let mut fixings = removed.clone();
        fixings.push(Fixing::one(s, c, a));
        if sk.blp_aip(&fixings)? {
            trace.push(TraceEvent::Cert { symbol: s, constraint: c, assignment: a });
            return Ok(finish(Verdict::Accept, trace, smap));
        }
    }
    trace.push(TraceEvent::Reject { stage: Stage::Certification });
    Ok(finish(Verdict::Reject, trace, smap))
}

pub fn clap_accepts(x: &RelationalStructure, a: &RelationalStructure) -> Result<Decision, RelaxError> {
    let sk = Skeleton::new(x, a)?;
    clap_run(&sk, &SweepMode::Sequential)
}

/// Singleton BLP: prune `a` from `D_x` while BLP with `x = a` is infeasible.
pub fn sblp_run(sk: &Skeleton) -> Result<bool, RelaxError> {
    let u = sk.unary_symbol();
    let n = sk.x().relation(u).len();
    let m = sk.a().relation(u).len();
    let mut alive = vec![vec![true; m]; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            for val in 0..m {
                if !alive[v][val] {
                    continue;
                }
                let mut fixings: Vec<Fixing> = (0..n)
                    .flat_map(|w| (0..m).map(move |b| (w, b)))
                    .filter(|&(w, b)| !alive[w][b])
                    .map(|(w, b)| Fixing::zero(u, w, b))
                    .collect();
                fixings.push(Fixing::one(u, v, val));
                if !sk.blp_feasible(&fixings)? {
                    alive[v][val] = false;
                    changed = true;
                    if !alive[v].contains(&true) {
                        return Ok(false);
                    }
                }
            }
        }
        if !changed {
            return Ok(true);
        }
    }
}

pub fn sblp_accepts(x: &RelationalStructure, a: &RelationalStructure) -> Result<bool, RelaxError> {
    let sk = Skeleton::new(x, a)?;
    // zero variables: vacuous acceptance
    if sk.x().domain_size() == 0 {
        return Ok(true);
    }
    sblp_run(&sk)
}
