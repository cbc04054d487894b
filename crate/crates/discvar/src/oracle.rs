//! Finite-field checks run alongside a solve.
//!
//! Each check runs once per requested prime, retrying at the next prime when
//! a coefficient denominator vanishes mod `p`. Running out of good primes
//! counts as a failed check; any other error aborts the run.

use std::collections::BTreeSet;

use discvar_core::fp_oracle::{
    check_over_primes, corollary1_check, enumerate_variety, lemma1_check,
    projection_containment_check, reduce_mod_p, PrimeOutcome,
};
use discvar_core::{DiscriminantVarietyResult, Error, ParametricSystem, Polynomial, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Points drawn by the sampling check.
pub const SAMPLE_POINTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Nothing to check, e.g. corollary 1 when `delta >= d`.
    Vacuous,
    /// Every prime up to the given bound divided a denominator.
    NoGoodPrime(u64),
}

impl Outcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Fail | Outcome::NoGoodPrime(_))
    }

    pub fn describe(&self) -> String {
        match self {
            Outcome::Pass => "pass".into(),
            Outcome::Fail => "fail".into(),
            Outcome::Vacuous => "pass (vacuous)".into(),
            Outcome::NoGoodPrime(bound) => format!("fail (no good prime at or below {bound})"),
        }
    }

    /// The short status word used in structured reports.
    pub fn status(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Vacuous => "vacuous",
            Outcome::NoGoodPrime(_) => "no_good_prime",
        }
    }
}

/// One check at one prime; `k` is the minor size where it applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRun {
    pub k: Option<i64>,
    pub requested: u64,
    pub used: u64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub outcome: Outcome,
    pub runs: Vec<CheckRun>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub primes: Vec<u64>,
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.outcome.is_failure())
    }
}

struct Collector {
    runs: Vec<CheckRun>,
    outcome: Outcome,
}

impl Collector {
    fn new() -> Self {
        Collector {
            runs: Vec::new(),
            outcome: Outcome::Pass,
        }
    }

    fn absorb(&mut self, k: Option<i64>, result: Result<Vec<PrimeOutcome>>) -> Result<()> {
        match result {
            Ok(outcomes) => {
                for o in outcomes {
                    if !o.passed && self.outcome == Outcome::Pass {
                        self.outcome = Outcome::Fail;
                    }
                    self.runs.push(CheckRun {
                        k,
                        requested: o.requested,
                        used: o.used,
                        passed: o.passed,
                    });
                }
                Ok(())
            }
            Err(Error::NoGoodPrime(bound)) => {
                self.outcome = Outcome::NoGoodPrime(bound);
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    fn finish(self, name: &'static str) -> CheckSummary {
        CheckSummary {
            name,
            outcome: self.outcome,
            runs: self.runs,
        }
    }
}

/// Lemma 1 for every admissible minor size `1..=min(#E, #X)`.
pub fn lemma1_summary(sys: &ParametricSystem, primes: &[u64]) -> Result<CheckSummary> {
    let ring = sys.ring();
    let f = sys.inequation_product()?;
    let kmax = sys.equalities().len().min(ring.unknowns().len()) as i64;
    let mut c = Collector::new();
    if kmax == 0 {
        c.outcome = Outcome::Vacuous;
    }
    for k in 1..=kmax {
        let r = check_over_primes(primes, |p| lemma1_check(ring, sys.equalities(), &f, k, p));
        c.absorb(Some(k), r)?;
    }
    Ok(c.finish("lemma1"))
}

/// Corollary 1 at minor size `d - delta`; vacuous when `delta >= d`.
pub fn corollary1_summary(sys: &ParametricSystem, delta: i64, primes: &[u64]) -> Result<CheckSummary> {
    let ring = sys.ring();
    let d = ring.parameters().len() as i64;
    let mut c = Collector::new();
    if delta >= d {
        c.outcome = Outcome::Vacuous;
        return Ok(c.finish("corollary1"));
    }
    let r = check_over_primes(primes, |p| {
        corollary1_check(ring, sys.equalities(), sys.inequations(), delta, p)
    });
    c.absorb(Some(d - delta), r)?;
    Ok(c.finish("corollary1"))
}

/// Every point of `V_p(I)` projects into `V_p` of the projection closure.
pub fn projection_summary(result: &DiscriminantVarietyResult, primes: &[u64]) -> Result<CheckSummary> {
    let pre = &result.preprocess;
    let ring = pre.basis.ring();
    let mut c = Collector::new();
    let r = check_over_primes(primes, |p| {
        projection_containment_check(ring, pre.basis.elements(), pre.projection_closure.elements(), p)
    });
    c.absorb(None, r)?;
    Ok(c.finish("projection"))
}

/// Self-consistency of the enumerator: seeded random points of `F_p^n` are in
/// the enumerated `V_p(I)` exactly when every generator vanishes there, and
/// sampled points of `V_p(I)` do vanish.
pub fn sampling_summary(result: &DiscriminantVarietyResult, primes: &[u64], seed: u64) -> Result<CheckSummary> {
    let gens = result.preprocess.basis.elements();
    let ring = result.preprocess.basis.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Collector::new();
    let r = check_over_primes(primes, |p| sample_once(ring, gens, p, &mut rng));
    c.absorb(None, r)?;
    Ok(c.finish("sampling"))
}

fn sample_once(
    ring: &discvar_core::Ring,
    gens: &[Polynomial],
    p: u64,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    let reduced = gens.iter().map(|g| reduce_mod_p(g, p)).collect::<Result<Vec<_>>>()?;
    let variety = enumerate_variety(ring, gens, p)?;
    let vanishes = |pt: &[u64]| reduced.iter().all(|g| g.evaluate(pt) == 0);
    for _ in 0..SAMPLE_POINTS {
        let pt: Vec<u64> = (0..ring.nvars()).map(|_| rng.random_range(0..p)).collect();
        if variety.contains(&pt) != vanishes(&pt) {
            return Ok(false);
        }
    }
    let points: Vec<&Vec<u64>> = variety.points.iter().collect();
    if !points.is_empty() {
        let mut picked = BTreeSet::new();
        for _ in 0..SAMPLE_POINTS {
            picked.insert(rng.random_range(0..points.len()));
        }
        if !picked.iter().all(|&i| vanishes(points[i])) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs every check. Errors other than running out of primes are returned.
pub fn run_oracle(
    sys: &ParametricSystem,
    result: &DiscriminantVarietyResult,
    primes: &[u64],
    seed: u64,
) -> Result<OracleReport> {
    let checks = vec![
        lemma1_summary(sys, primes)?,
        corollary1_summary(sys, result.preprocess.delta, primes)?,
        projection_summary(result, primes)?,
        sampling_summary(result, primes, seed)?,
    ];
    Ok(OracleReport {
        primes: primes.to_vec(),
        seed,
        checks,
    })
}
