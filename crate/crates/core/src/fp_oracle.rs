//! Exhaustive finite-field checks.
//!
//! Zariski statements about the pipeline become set equalities over `F_p`
//! for small primes: every point of the affine space is enumerated and the
//! relevant polynomials are evaluated. A coefficient denominator divisible
//! by `p` is reported as [`Error::BadPrime`]; [`check_over_primes`] then
//! moves on to the next prime.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::ideal::{eliminate, jacobian, minors_ideal, product, saturate};
use crate::monomial::Monomial;
use crate::order::BlockOrder;
use crate::poly::{mul_mod, pow_mod, reduce_coefficient, Polynomial};
use crate::ring::Ring;

/// Largest number of points an enumeration may visit.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// Retries after a bad prime stop at this modulus.
pub const RETRY_LIMIT: u64 = 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// A polynomial with coefficients in `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPolynomial {
    modulus: u64,
    nvars: usize,
    terms: Vec<(Monomial, u64)>,
}

impl FpPolynomial {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    pub fn evaluate(&self, point: &[u64]) -> u64 {
        debug_assert_eq!(point.len(), self.nvars);
        let p = self.modulus;
        self.terms.iter().fold(0, |acc, (m, c)| {
            let t = m
                .support()
                .fold(*c, |t, v| mul_mod(t, pow_mod(point[v], u64::from(m.exponent(v)), p), p));
            (acc + t) % p
        })
    }
}

/// Coefficient-wise reduction of `p` modulo `prime`.
pub fn reduce_mod_p(p: &Polynomial, prime: u64) -> Result<FpPolynomial> {
    check_prime(prime)?;
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let r = reduce_coefficient(c, prime)?;
        if r != 0 {
            terms.push((m.clone(), r));
        }
    }
    Ok(FpPolynomial {
        modulus: prime,
        nvars: p.ring().nvars(),
        terms,
    })
}

/// The common zeros over `F_p` of some polynomials, as explicit points.
///
/// Points assign every ring variable; coordinates outside the enumerated
/// variables are fixed at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpVariety {
    pub modulus: u64,
    pub points: BTreeSet<Vec<u64>>,
}

impl FpVariety {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &[u64]) -> bool {
        self.points.contains(point)
    }
}

/// All of `F_p^n` scanned against `gens`.
pub fn enumerate_variety(ring: &Ring, gens: &[Polynomial], prime: u64) -> Result<FpVariety> {
    let all: Vec<usize> = (0..ring.nvars()).collect();
    enumerate_variety_on(ring, &all, gens, prime)
}

/// Scans only the coordinates `vars` (others stay zero); meant for
/// generators that involve nothing but `vars`.
pub fn enumerate_variety_on(ring: &Ring, vars: &[usize], gens: &[Polynomial], prime: u64) -> Result<FpVariety> {
    check_prime(prime)?;
    let total = u128::from(prime).pow(vars.len() as u32);
    if total > u128::from(ENUMERATION_GUARD) {
        return Err(Error::GuardExceeded {
            points: total,
            limit: ENUMERATION_GUARD,
        });
    }
    let reduced = gens
        .iter()
        .map(|g| reduce_mod_p(g, prime))
        .collect::<Result<Vec<_>>>()?;
    let mut points = BTreeSet::new();
    for_each_point(ring.nvars(), vars, prime, |pt| {
        if reduced.iter().all(|g| g.evaluate(pt) == 0) {
            points.insert(pt.to_vec());
        }
    });
    Ok(FpVariety {
        modulus: prime,
        points,
    })
}

fn for_each_point(nvars: usize, vars: &[usize], prime: u64, mut visit: impl FnMut(&[u64])) {
    let mut pt = alloc::vec![0u64; nvars];
    loop {
        visit(&pt);
        // odometer over the chosen coordinates
        let mut i = 0;
        loop {
            if i == vars.len() {
                return;
            }
            let v = vars[i];
            pt[v] += 1;
            if pt[v] < prime {
                break;
            }
            pt[v] = 0;
            i += 1;
        }
    }
}

fn minors_mod_p(ring: &Arc<Ring>, gens: &[Polynomial], vars: &[usize], k: i64, prime: u64) -> Result<Vec<FpPolynomial>> {
    let ideal = if vars.is_empty() {
        crate::ideal::Ideal::unit(ring.clone())
    } else {
        minors_ideal(&jacobian(ring, gens, vars)?, k)?
    };
    ideal
        .generators()
        .iter()
        .map(|m| reduce_mod_p(m, prime))
        .collect()
}

fn vanish(polys: &[FpPolynomial], pt: &[u64]) -> bool {
    polys.iter().all(|g| g.evaluate(pt) == 0)
}

/// Lemma-1 style comparison over `F_p`: off `V(f)`, the zeros of
/// `I + Jac_X^k(I)` and of `I + Jac_X^k(<E>)` coincide, where
/// `I = <E> : f^inf`.
pub fn lemma1_check(ring: &Arc<Ring>, equalities: &[Polynomial], f: &Polynomial, k: i64, prime: u64) -> Result<bool> {
    check_prime(prime)?;
    let sat = saturate(ring, equalities, f)?;
    let unknowns = ring.unknowns();
    let from_ideal = minors_mod_p(ring, sat.generators(), &unknowns, k, prime)?;
    let from_input = minors_mod_p(ring, equalities, &unknowns, k, prime)?;
    let f_p = reduce_mod_p(f, prime)?;
    let base = enumerate_variety(ring, sat.generators(), prime)?;
    Ok(base
        .points
        .iter()
        .filter(|pt| f_p.evaluate(pt) != 0)
        .all(|pt| vanish(&from_ideal, pt) == vanish(&from_input, pt)))
}

/// Corollary-1 style comparison over `F_p` on parameter space: off
/// `V(<prod F> ∩ Q[U])`, the zeros of `II + Jac_U^{d-delta}(II)` and of
/// `II + Jac_U^{d-delta}(<E> ∩ Q[U])` coincide, where `II = I ∩ Q[U]`.
/// Vacuously true when `delta >= d`.
pub fn corollary1_check(
    ring: &Arc<Ring>,
    equalities: &[Polynomial],
    inequations: &[Polynomial],
    delta: i64,
    prime: u64,
) -> Result<bool> {
    check_prime(prime)?;
    let params = ring.parameters();
    let d = params.len() as i64;
    if delta >= d {
        return Ok(true);
    }
    let unknowns = ring.unknowns();
    let order = BlockOrder::elimination(ring);
    let f = product(ring, inequations)?;
    let sat = saturate(ring, equalities, &f)?;
    let ii = eliminate(&sat.basis(&order)?, &unknowns)?;
    let e_u = eliminate(&buchberger(equalities, &order)?, &unknowns)?;
    let excluded = eliminate(&buchberger(&[f], &order)?, &unknowns)?;

    let k = d - delta;
    let from_ii = minors_mod_p(ring, &ii, &params, k, prime)?;
    let from_e = minors_mod_p(ring, &e_u, &params, k, prime)?;
    let excluded_p = excluded
        .iter()
        .map(|h| reduce_mod_p(h, prime))
        .collect::<Result<Vec<_>>>()?;
    let base = enumerate_variety_on(ring, &params, &ii, prime)?;
    Ok(base
        .points
        .iter()
        .filter(|pt| !vanish(&excluded_p, pt))
        .all(|pt| vanish(&from_ii, pt) == vanish(&from_e, pt)))
}

/// Soundness of elimination over `F_p`: every point of `V_p(ideal)` projects
/// into `V_p(projection)`.
pub fn projection_containment_check(
    ring: &Arc<Ring>,
    ideal: &[Polynomial],
    projection: &[Polynomial],
    prime: u64,
) -> Result<bool> {
    let variety = enumerate_variety(ring, ideal, prime)?;
    let proj = projection
        .iter()
        .map(|p| reduce_mod_p(p, prime))
        .collect::<Result<Vec<_>>>()?;
    let params = ring.parameters();
    Ok(variety.points.iter().all(|pt| {
        let mut image = alloc::vec![0u64; pt.len()];
        for &u in &params {
            image[u] = pt[u];
        }
        vanish(&proj, &image)
    }))
}

/// Outcome of one check at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeOutcome {
    /// Prime that was asked for.
    pub requested: u64,
    /// Prime the check actually ran at after bad-prime retries.
    pub used: u64,
    pub passed: bool,
}

/// Runs `check` once per requested prime. On [`Error::BadPrime`] the next
/// unused prime up to [`RETRY_LIMIT`] is tried; other errors abort.
pub fn check_over_primes<F>(primes: &[u64], mut check: F) -> Result<Vec<PrimeOutcome>>
where
    F: FnMut(u64) -> Result<bool>,
{
    let mut used: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::with_capacity(primes.len());
    for &requested in primes {
        check_prime(requested)?;
        let mut p = requested;
        loop {
            if used.contains(&p) {
                p = next_prime(p);
                if p > RETRY_LIMIT.max(requested) {
                    return Err(Error::NoGoodPrime(RETRY_LIMIT.max(requested)));
                }
                continue;
            }
            match check(p) {
                Ok(passed) => {
                    used.insert(p);
                    out.push(PrimeOutcome {
                        requested,
                        used: p,
                        passed,
                    });
                    break;
                }
                Err(Error::BadPrime(_)) => {
                    used.insert(p);
                    p = next_prime(p);
                    if p > RETRY_LIMIT.max(requested) {
                        return Err(Error::NoGoodPrime(RETRY_LIMIT.max(requested)));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

pub fn next_prime(n: u64) -> u64 {
    let mut m = n + 1;
    while !is_prime(m) {
        m += 1;
    }
    m
}
