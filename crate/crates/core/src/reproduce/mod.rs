//! The acceptance suite: eleven seeded checks, each reported as one line.

mod generate;

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use generate::{
    planted_instance, random_instance, random_map, random_skeletal, random_tie_matrix, small_ternary_instances,
};

use crate::exactmath::Rational;
use crate::minionlab::{enumerate_c_d, random_c_d, regime_n, tiebreak, xi_map, EvcMatrix, MinorMap};
use crate::polymorph::{
    aip_polymorphism, check_symmetry_class, example_polymorphism, example_template, example_tie_matrix,
    is_h_symmetric, is_polymorphism, is_tieless, ExamplePolymorphism, Operation, SymmetryClass, TieMatrix,
    DEFAULT_BUDGET,
};
use crate::propagation::{cblp_run, clap_run, sblp_run, SweepMode};
use crate::relaxations::{RelaxError, Skeleton};
use crate::structures::{directed_cycle, find_homomorphism, nae, one_in_three, RelationalStructure};

pub const DEFAULT_SEED: u64 = 20240917;

pub const CRITERIA: [&str; 11] = [
    "separation on the directed 5-cycle",
    "AIP solves (1-in-3, NAE) on small instances",
    "completeness on planted instances",
    "algorithm ladder monotonicity",
    "CBLP fixpoint independent of sweep order",
    "example polymorphisms are H-symmetric polymorphisms",
    "alternating polymorphisms of (1-in-3, NAE)",
    "tie-breaking postconditions",
    "minion closure and minor composition",
    "exact re-substitution and BLP call bound",
    "xi commutes with minors",
];

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn title(&self) -> &'static str {
        CRITERIA[self.id - 1]
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} : {} ({}; {:.2?})",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title(),
            self.detail,
            self.elapsed
        )
    }
}

type Outcome = Result<(bool, String), String>;

fn rng_for(seed: u64, id: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn relax(e: RelaxError) -> String {
    e.to_string()
}

pub fn run_criterion(id: usize, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => separation(),
        2 => aip_small_sweep(),
        3 => completeness(seed),
        4 => ladder(seed),
        5 => fixpoint_order(seed),
        6 => example_certificates(),
        7 => alternating_family(),
        8 => tiebreak_postconditions(seed),
        9 => minion_algebra(seed),
        10 => exact_guards(seed),
        11 => xi_commutation(seed),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, passed, detail, elapsed: start.elapsed() }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, seed)).collect()
}

struct Templates {
    example: (RelationalStructure, RelationalStructure),
    boolean: (RelationalStructure, RelationalStructure),
}

fn templates() -> Templates {
    let t = example_template();
    Templates { example: (t.a, t.b), boolean: (one_in_three(), nae()) }
}

/// Mixed instances: even indices use the example template, odd the boolean
/// one; planted when `planted(i)`.
fn instance_batch(
    rng: &mut ChaCha8Rng,
    count: usize,
    planted: impl Fn(usize) -> bool,
) -> Vec<(usize, RelationalStructure)> {
    let ts = templates();
    (0..count)
        .map(|i| {
            let which = i % 2;
            let a = if which == 0 { &ts.example.0 } else { &ts.boolean.0 };
            let n = rng.gen_range(2..=5);
            let m = rng.gen_range(1..=5);
            let x = if planted(i) {
                planted_instance(rng, a, n, m).0
            } else {
                random_instance(rng, a.signature(), n, m)
            };
            (which, x)
        })
        .collect()
}

fn pick(ts: &Templates, which: usize) -> &(RelationalStructure, RelationalStructure) {
    if which == 0 { &ts.example } else { &ts.boolean }
}

fn separation() -> Outcome {
    let t = example_template();
    let x = directed_cycle(5, t.signature(), "R2");
    let start = Instant::now();
    let to_b = find_homomorphism(&x, &t.b).map_err(|e| e.to_string())?.is_some();
    let sk = Skeleton::new(&x, &t.a).map_err(relax)?;
    let blp_aip = sk.blp_aip(&[]).map_err(relax)?;
    let clap = clap_run(&Skeleton::new(&x, &t.a).map_err(relax)?, &SweepMode::Sequential).map_err(relax)?;
    let elapsed = start.elapsed();
    let ok = !to_b && blp_aip && !clap.accepted() && elapsed < Duration::from_secs(10);
    Ok((
        ok,
        format!(
            "X->B {}, blp-aip {}, clap {} after {} BLP calls",
            if to_b { "exists" } else { "none" },
            if blp_aip { "ACCEPT" } else { "REJECT" },
            clap.verdict,
            clap.blp_calls
        ),
    ))
}

fn aip_small_sweep() -> Outcome {
    let (a, b) = (one_in_three(), nae());
    let instances = small_ternary_instances(a.signature(), 3, 3);
    let violations: usize = instances
        .par_iter()
        .map(|x| -> Result<usize, String> {
            let to_a = find_homomorphism(x, &a).map_err(|e| e.to_string())?.is_some();
            let to_b = find_homomorphism(x, &b).map_err(|e| e.to_string())?.is_some();
            let aip = Skeleton::new(x, &a).map_err(relax)?.aip_solution(&[]).is_some();
            Ok(usize::from((to_a && !aip) || (aip && !to_b)))
        })
        .sum::<Result<usize, String>>()?;
    Ok((violations == 0, format!("{} instances, {violations} violations", instances.len())))
}

#[derive(Debug, Default, Clone, Copy)]
struct Verdicts {
    blp: bool,
    aip: bool,
    blp_aip: bool,
    sblp: bool,
    cblp: bool,
    clap: bool,
}

fn all_verdicts(x: &RelationalStructure, a: &RelationalStructure) -> Result<Verdicts, String> {
    let sk = Skeleton::new(x, a).map_err(relax)?;
    Ok(Verdicts {
        blp: sk.blp_feasible(&[]).map_err(relax)?,
        aip: sk.aip_solution(&[]).is_some(),
        blp_aip: sk.blp_aip(&[]).map_err(relax)?,
        sblp: sblp_run(&sk).map_err(relax)?,
        cblp: !cblp_run(&sk, &SweepMode::Sequential).map_err(relax)?.0.any_empty(),
        clap: clap_run(&sk, &SweepMode::Sequential).map_err(relax)?.accepted(),
    })
}

fn completeness(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 3);
    let ts = templates();
    let mut details = Vec::new();
    let mut total = 0;
    for which in 0..2 {
        let (a, _) = pick(&ts, which);
        let batch: Vec<RelationalStructure> = (0..500)
            .map(|_| {
                let n = rng.gen_range(2..=5);
                let m = rng.gen_range(1..=5);
                planted_instance(&mut rng, a, n, m).0
            })
            .collect();
        let bad: usize = batch
            .par_iter()
            .map(|x| {
                all_verdicts(x, a).map(|v| usize::from(!(v.blp && v.aip && v.blp_aip && v.sblp && v.cblp && v.clap)))
            })
            .sum::<Result<usize, String>>()?;
        details.push(format!("{}: {bad}/500 rejected", if which == 0 { "example" } else { "1-in-3/NAE" }));
        total += bad;
    }
    Ok((total == 0, details.join(", ")))
}

fn ladder(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 4);
    let ts = templates();
    let batch = instance_batch(&mut rng, 500, |i| (i / 2) % 2 == 0);
    let counts = batch
        .par_iter()
        .map(|(which, x)| -> Result<(usize, usize, usize), String> {
            let (a, b) = pick(&ts, *which);
            let v = all_verdicts(x, a)?;
            let ladder = (v.clap && !v.blp_aip) || (v.blp_aip && !v.blp) || (v.cblp && !v.sblp);
            let unsound = v.clap && find_homomorphism(x, b).map_err(|e| e.to_string())?.is_none();
            Ok((usize::from(ladder), usize::from(unsound), usize::from(v.clap)))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let violations: usize = counts.iter().map(|c| c.0).sum();
    let unsound: usize = counts.iter().map(|c| c.1).sum();
    let accepted: usize = counts.iter().map(|c| c.2).sum();
    Ok((
        violations == 0,
        format!("500 instances, {accepted} CLAP accepts, {violations} violations, {unsound} accepts without X->B"),
    ))
}

fn fixpoint_order(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 5);
    let ts = templates();
    let batch = instance_batch(&mut rng, 100, |i| (i / 2) % 2 == 0);
    let orders: Vec<Vec<Vec<(usize, usize, usize)>>> = batch
        .iter()
        .map(|(which, x)| {
            let sk = Skeleton::new(x, &pick(&ts, *which).0).expect("matching signatures");
            let lex: Vec<_> = crate::propagation::SMap::full(&sk).triples().collect();
            (0..5)
                .map(|_| {
                    let mut o = lex.clone();
                    o.shuffle(&mut rng);
                    o
                })
                .collect()
        })
        .collect();
    let mismatches: usize = batch
        .par_iter()
        .zip(&orders)
        .map(|((which, x), orders)| -> Result<usize, String> {
            let sk = Skeleton::new(x, &pick(&ts, *which).0).map_err(relax)?;
            let name = |s: usize| sk.x().signature().name(s).to_string();
            let reference = cblp_run(&sk, &SweepMode::Sequential).map_err(relax)?.0.serialize(name);
            let mut bad = 0;
            for mode in orders.iter().cloned().map(SweepMode::Ordered).chain([SweepMode::Jacobi]) {
                if cblp_run(&sk, &mode).map_err(relax)?.0.serialize(name) != reference {
                    bad += 1;
                }
            }
            Ok(bad)
        })
        .sum::<Result<usize, String>>()?;
    Ok((mismatches == 0, format!("100 instances x 6 schedules, {mismatches} mismatches")))
}

fn example_certificates() -> Outcome {
    let t = example_template();
    let h = example_tie_matrix();
    let mut failures = Vec::new();
    for l in 1..=5 {
        let f = example_polymorphism(l, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let pol = is_polymorphism(&f, &t.a, &t.b, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let sym = is_h_symmetric(&f, &h).map_err(|e| e.to_string())?;
        if !(pol && sym) {
            failures.push(l);
        }
    }
    Ok((failures.is_empty(), format!("arities 1..=5, failing arities {failures:?}")))
}

fn alternating_family() -> Outcome {
    let (a, b) = (one_in_three(), nae());
    let mut failures = Vec::new();
    for l in [1, 3, 5] {
        let f = aip_polymorphism(l).map_err(|e| e.to_string())?;
        let pol = is_polymorphism(&f, &a, &b, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        if !(pol && check_symmetry_class(&f, SymmetryClass::Alternating)) {
            failures.push(l);
        }
    }
    Ok((failures.is_empty(), format!("arities 1, 3, 5, failing arities {failures:?}")))
}

/// `H M v` computed column by column, independent of the solver's helper.
fn h_m_v(h: &TieMatrix, m: &EvcMatrix, v: &[Rational]) -> Vec<Rational> {
    let mut mv = vec![Rational::zero(); m.rows()];
    for (i, vi) in v.iter().enumerate() {
        for (r, x) in m.column(i).iter().enumerate() {
            mv[r] += &(x * vi);
        }
    }
    h.rows()
        .iter()
        .map(|row| row.iter().zip(&mv).map(|(&c, x)| Rational::from(c) * x).sum())
        .collect()
}

fn tiebreak_postconditions(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 8);
    let mut violations = 0;
    let mut max_iters = 0;
    for trial in 0..200 {
        let k = rng.gen_range(1..=3);
        let ms: Vec<EvcMatrix> = (0..k).map(|_| random_skeletal(&mut rng, 7, 5, 6)).collect();
        let h = if trial % 4 == 0 {
            example_tie_matrix()
        } else {
            let rows = rng.gen_range(1..=4);
            random_tie_matrix(&mut rng, rows, 7, 4)
        };
        let Ok(r) = tiebreak(&ms, &h) else {
            violations += 1;
            continue;
        };
        let stochastic = r.v.iter().all(|x| !x.is_negative()) && r.v.iter().sum::<Rational>().is_one();
        let first = r.v.first().is_some_and(Rational::is_positive);
        let tieless = ms.iter().all(|m| is_tieless(&h_m_v(&h, m, &r.v)));
        if !(stochastic && first && tieless && r.iterations <= r.initial_ties) {
            violations += 1;
        }
        max_iters = max_iters.max(r.iterations);
    }
    Ok((violations == 0, format!("200 trials, {violations} violations, at most {max_iters} steps")))
}

fn minion_algebra(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 9);
    let mut violations = 0;
    for _ in 0..200 {
        let d = rng.gen_range(1..=6);
        let l = rng.gen_range(1..=5);
        let el = random_c_d(&mut rng, l, d);
        let l1 = rng.gen_range(1..=5);
        let l2 = rng.gen_range(1..=5);
        let pi = MinorMap::new(random_map(&mut rng, l, l1), l1).map_err(|e| e.to_string())?;
        let rho = MinorMap::new(random_map(&mut rng, l1, l2), l2).map_err(|e| e.to_string())?;
        let once = el.minor_by(&pi).map_err(|e| e.to_string())?;
        let twice = once.minor_by(&rho).map_err(|e| e.to_string())?;
        let direct = el.minor_by(&pi.compose(&rho).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if !el.in_c_d(d) || !once.is_minion_element() || !once.in_c_d(d) || twice != direct {
            violations += 1;
        }
    }
    Ok((violations == 0, format!("200 elements, {violations} violations")))
}

fn exact_guards(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 10);
    let ts = templates();
    let batch = instance_batch(&mut rng, 200, |i| (i / 2) % 2 == 0);
    let stats = batch
        .par_iter()
        .map(|(which, x)| -> Result<(usize, usize, usize), String> {
            let a = &pick(&ts, *which).0;
            let plain = Skeleton::new(x, a).map_err(relax)?;
            plain.set_audit(true);
            plain.blp_feasible(&[]).map_err(relax)?;
            plain.aip_solution(&[]);
            plain.blp_aip(&[]).map_err(relax)?;
            let sk = Skeleton::new(x, a).map_err(relax)?;
            sk.set_audit(true);
            let d = clap_run(&sk, &SweepMode::Sequential).map_err(relax)?;
            let g = sk.g();
            let over = usize::from(d.blp_calls > 2 * g * g);
            let audited = plain.counters().audited() + sk.counters().audited();
            let failed = plain.counters().audit_failures() + sk.counters().audit_failures();
            Ok((audited, failed, over))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let audited: usize = stats.iter().map(|s| s.0).sum();
    let failed: usize = stats.iter().map(|s| s.1).sum();
    let over: usize = stats.iter().map(|s| s.2).sum();
    Ok((
        failed == 0 && over == 0 && audited > 0,
        format!("{audited} solutions re-substituted, {failed} mismatches, {over} runs over 2g^2"),
    ))
}

/// Minor commutation at `d = 1` and `d = 2`, at `c = N^2` and
/// `c = N^2 + N - 1`. The tie-breaking set is every matrix of the 7-ary part
/// of the level-`d` subminion, which contains all 7-ary minors used by the
/// argument.
fn xi_commutation(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 11);
    let h = example_tie_matrix();
    let mut violations = 0;
    let mut configs = Vec::new();
    for d in [1usize, 2] {
        let family = enumerate_c_d(7, d, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let ms: Vec<EvcMatrix> = family.iter().map(|e| e.m.clone()).collect();
        let v = tiebreak(&ms, &h).map_err(|e| e.to_string())?.v;
        let n = regime_n(&h, &v, d);
        for c in [&n * &n, &n * &n + &n - BigInt::from(1)] {
            let arity = c.to_usize().ok_or("arity overflows")?;
            let f = ExamplePolymorphism { arity };
            configs.push(format!("D={d} N={n} c={c}"));
            for _ in 0..1000 {
                let l = rng.gen_range(1..=4);
                let l2 = rng.gen_range(1..=4);
                let el = random_c_d(&mut rng, l, d);
                let pi = random_map(&mut rng, l, l2);
                let minor = el.minor(&pi, l2).map_err(|e| e.to_string())?;
                let lhs = xi_map(&minor, &f, &h, &v, d, &n).map_err(|e| e.to_string())?;
                let rhs = xi_map(&el, &f, &h, &v, d, &n).map_err(|e| e.to_string())?;
                let b: Vec<usize> = (0..l2).map(|_| rng.gen_range(0..7)).collect();
                let pulled: Vec<usize> = pi.iter().map(|&j| b[j]).collect();
                if lhs.eval(&b) != rhs.eval(&pulled) {
                    violations += 1;
                }
            }
        }
    }
    Ok((violations == 0, format!("{} x 1000 samples, {violations} violations", configs.join("; "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn titles_line_up() {
        let r = CriterionResult { id: 7, passed: true, detail: String::new(), elapsed: Duration::ZERO };
        assert!(r.to_string().starts_with("criterion  7 PASS"));
        assert!(run_criterion(12, 0).detail.contains("no criterion"));
    }
}
