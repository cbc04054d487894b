//! Seeded random parametric systems for differential testing.
//!
//! Shape: 1 or 2 parameters, 1 or 2 unknowns, 1 to 3 equalities of total
//! degree at most 2 with coefficients in `[-3, 3]`, and one nonzero
//! inequation of degree at most 1.

use std::sync::Arc;

use discvar_core::{Monomial, ParametricSystem, Polynomial, Rational, Ring};
use rand::Rng;

const PARAMETER_NAMES: [&str; 2] = ["u", "v"];
const UNKNOWN_NAMES: [&str; 2] = ["x", "y"];

/// Every monomial in `nvars` variables of total degree at most `max_degree`.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(nvars)];
    let mut frontier = out.clone();
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &frontier {
            // extend only at or after the last used variable to avoid repeats
            let start = m.support().last().unwrap_or(0);
            for v in start..nvars {
                let mut e = m.exponents().to_vec();
                e[v] += 1;
                next.push(Monomial::from_exponents(e));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A nonzero polynomial of degree at most `max_degree`; each monomial gets a
/// coefficient drawn uniformly from `[-3, 3]`, so about one in seven is absent.
pub fn random_polynomial<R: Rng>(rng: &mut R, ring: &Arc<Ring>, max_degree: u32) -> Polynomial {
    let monos = monomials_up_to(ring.nvars(), max_degree);
    loop {
        let p = Polynomial::from_terms(
            ring.clone(),
            monos
                .iter()
                .map(|m| (m.clone(), Rational::from_integer(rng.random_range(-3i64..=3).into()))),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// Sparse variant: between 1 and `max_terms` distinct monomials with nonzero
/// coefficients in `[-3, 3]`.
pub fn random_sparse_polynomial<R: Rng>(
    rng: &mut R,
    ring: &Arc<Ring>,
    max_degree: u32,
    max_terms: usize,
) -> Polynomial {
    let monos = monomials_up_to(ring.nvars(), max_degree);
    let nterms = rng.random_range(1..=max_terms.min(monos.len()));
    let picked = rand::seq::index::sample(rng, monos.len(), nterms);
    let terms: Vec<(Monomial, Rational)> = picked
        .iter()
        .map(|i| {
            let mut c = 0i64;
            while c == 0 {
                c = rng.random_range(-3i64..=3);
            }
            (monos[i].clone(), Rational::from_integer(c.into()))
        })
        .collect();
    Polynomial::from_terms(ring.clone(), terms)
}

/// A random system of the documented shape. Equalities are sparse (up to
/// four terms) so that the systems are not generically trivial.
pub fn random_system<R: Rng>(rng: &mut R) -> ParametricSystem {
    let d = rng.random_range(1..=2);
    let n = rng.random_range(1..=2);
    let ring = Ring::new(&PARAMETER_NAMES[..d], &UNKNOWN_NAMES[..n]).expect("distinct names");
    let neq = rng.random_range(1..=3);
    let equalities = (0..neq).map(|_| random_sparse_polynomial(rng, &ring, 2, 4)).collect();
    let inequation = random_sparse_polynomial(rng, &ring, 1, 2);
    ParametricSystem::new(ring, equalities, vec![inequation]).expect("at least one equality")
}
