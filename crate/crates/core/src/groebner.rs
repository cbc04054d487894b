//! Multivariate division and Buchberger's algorithm over `Q`.
//!
//! Internally polynomials are term vectors sorted ascending under the active
//! order, so the leading term is the last entry and the tail of a reduction
//! is a merge.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::order::BlockOrder;
use crate::poly::{Polynomial, Rational};
use crate::ring::{same_ring, Ring};

type Term = (Monomial, Rational);

/// A Gröbner basis together with the order it was computed under.
///
/// When `is_reduced()` holds, the elements are monic, no term of one element
/// is divisible by the leading monomial of another, and they are sorted
/// ascending by leading monomial. The zero ideal has no elements; the unit
/// ideal is `[1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    order: BlockOrder,
    elements: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn zero_ideal(ring: Arc<Ring>, order: BlockOrder) -> Self {
        GroebnerBasis {
            ring,
            order,
            elements: Vec::new(),
            reduced: true,
        }
    }

    pub fn unit_ideal(ring: Arc<Ring>, order: BlockOrder) -> Self {
        let one = Polynomial::one(ring.clone());
        GroebnerBasis {
            ring,
            order,
            elements: alloc::vec![one],
            reduced: true,
        }
    }

    /// Wraps elements that are already known to form a reduced basis.
    pub(crate) fn from_reduced(ring: Arc<Ring>, order: BlockOrder, elements: Vec<Polynomial>) -> Self {
        GroebnerBasis {
            ring,
            order,
            elements,
            reduced: true,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> &BlockOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Polynomial> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// The basis generates the whole ring.
    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(Polynomial::is_unit)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| {
                crate::order::leading_term(g, &self.order)
                    .expect("basis elements are nonzero")
                    .0
            })
            .collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        normal_form(f, &self.elements, &self.order)
    }

    /// Ideal membership; sound only for an actual Gröbner basis.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> Result<bool> {
        for (i, f) in self.elements.iter().enumerate() {
            for g in &self.elements[i + 1..] {
                if !self.normal_form(&s_polynomial(f, g, &self.order)?)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn canonical_strings(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|g| g.canonical_string(&self.order))
            .collect()
    }
}

/// Result of dividing `f` by a list: `f = sum(quotients[i] * divisors[i]) + remainder`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

impl Division {
    /// Recomputes `sum(q_i * g_i) + r` to certify the division.
    pub fn replay(&self, divisors: &[Polynomial]) -> Result<Polynomial> {
        let mut acc = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(divisors) {
            acc = acc.try_add(&q.try_mul(g)?)?;
        }
        Ok(acc)
    }
}

fn ascending(p: &Polynomial, order: &BlockOrder) -> Vec<Term> {
    let mut terms: Vec<Term> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    terms.sort_by(|a, b| order.compare(&a.0, &b.0));
    terms
}

fn to_poly(ring: &Arc<Ring>, terms: Vec<Term>) -> Polynomial {
    Polynomial::from_terms(ring.clone(), terms)
}

/// `p - c * m * g` for ascending term vectors.
fn sub_scaled(p: Vec<Term>, g: &[Term], m: &Monomial, c: &Rational, order: &BlockOrder) -> Result<Vec<Term>> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut shifted = g
        .iter()
        .map(|(gm, gc)| Ok((gm.try_mul(m)?, gc * c)))
        .collect::<Result<Vec<Term>>>()?
        .into_iter()
        .peekable();
    let mut p = p.into_iter().peekable();
    loop {
        let ord = match (p.peek(), shifted.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some(a), Some(b)) => order.compare(&a.0, &b.0),
        };
        match ord {
            Ordering::Less => out.push(p.next().unwrap()),
            Ordering::Greater => {
                let (sm, sc) = shifted.next().unwrap();
                out.push((sm, -sc));
            }
            Ordering::Equal => {
                let (pm, pc) = p.next().unwrap();
                let (_, sc) = shifted.next().unwrap();
                let diff = pc - sc;
                if !diff.is_zero() {
                    out.push((pm, diff));
                }
            }
        }
    }
    Ok(out)
}

/// Full reduction of `p` by `divisors`; returns the remainder (ascending).
/// When `quotients` is given, the multipliers used are appended per divisor.
fn reduce(
    mut p: Vec<Term>,
    divisors: &[&[Term]],
    order: &BlockOrder,
    mut quotients: Option<&mut Vec<Vec<Term>>>,
) -> Result<Vec<Term>> {
    let mut rem_desc: Vec<Term> = Vec::new();
    while let Some((lm, lc)) = p.last() {
        let hit = divisors.iter().enumerate().find_map(|(i, g)| {
            let (gm, gc) = g.last()?;
            lm.checked_div(gm).map(|q| (i, q, lc / gc))
        });
        match hit {
            Some((i, qm, qc)) => {
                p = sub_scaled(p, divisors[i], &qm, &qc, order)?;
                if let Some(qs) = quotients.as_deref_mut() {
                    qs[i].push((qm, qc));
                }
            }
            None => rem_desc.push(p.pop().unwrap()),
        }
    }
    rem_desc.reverse();
    Ok(rem_desc)
}

fn check_inputs<'a>(polys: impl IntoIterator<Item = &'a Polynomial>, order: &BlockOrder) -> Result<Option<Arc<Ring>>> {
    let mut ring: Option<Arc<Ring>> = None;
    for p in polys {
        match &ring {
            None => {
                order.check_ring(p.ring())?;
                ring = Some(p.ring().clone());
            }
            Some(r) if !same_ring(r, p.ring()) => return Err(Error::RingMismatch),
            _ => {}
        }
    }
    Ok(ring)
}

/// Remainder of `f` on division by `divisors` under `order`.
///
/// No term of the result is divisible by a leading monomial of a divisor,
/// and `f - remainder` lies in the ideal they generate.
pub fn normal_form(f: &Polynomial, divisors: &[Polynomial], order: &BlockOrder) -> Result<Polynomial> {
    Ok(normal_form_with_trace(f, divisors, order)?.remainder)
}

/// [`normal_form`] that also returns the quotients of the division.
pub fn normal_form_with_trace(f: &Polynomial, divisors: &[Polynomial], order: &BlockOrder) -> Result<Division> {
    check_inputs(core::iter::once(f).chain(divisors), order)?;
    let ring = f.ring();
    let sorted: Vec<Vec<Term>> = divisors.iter().map(|g| ascending(g, order)).collect();
    let views: Vec<&[Term]> = sorted.iter().map(Vec::as_slice).collect();
    let mut qs = alloc::vec![Vec::new(); divisors.len()];
    let rem = reduce(ascending(f, order), &views, order, Some(&mut qs))?;
    Ok(Division {
        quotients: qs.into_iter().map(|q| to_poly(ring, q)).collect(),
        remainder: to_poly(ring, rem),
    })
}

fn spoly_terms(f: &[Term], g: &[Term], order: &BlockOrder) -> Result<Vec<Term>> {
    let (fm, fc) = f.last().ok_or(Error::ZeroPolynomial)?;
    let (gm, gc) = g.last().ok_or(Error::ZeroPolynomial)?;
    let lcm = fm.lcm(gm);
    let mf = lcm.checked_div(fm).expect("lcm is a multiple");
    let mg = lcm.checked_div(gm).expect("lcm is a multiple");
    // (lcm/LT(f)) f - (lcm/LT(g)) g
    let left: Vec<Term> = f
        .iter()
        .map(|(m, c)| Ok((m.try_mul(&mf)?, c / fc)))
        .collect::<Result<_>>()?;
    sub_scaled(left, g, &mg, &gc.recip(), order)
}

/// S-polynomial of `f` and `g`: cancels their leading terms over the lcm of
/// the leading monomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &BlockOrder) -> Result<Polynomial> {
    check_inputs([f, g], order)?;
    let s = spoly_terms(&ascending(f, order), &ascending(g, order), order)?;
    Ok(to_poly(f.ring(), s))
}

/// Knobs for [`buchberger_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroebnerOptions {
    /// Skip pairs covered by Buchberger's chain criterion.
    pub chain_criterion: bool,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        GroebnerOptions {
            chain_criterion: true,
        }
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
///
/// Zero generators are ignored; if nothing else is left the zero ideal's
/// empty basis is returned. `gens` must be nonempty so the ring is known.
pub fn buchberger(gens: &[Polynomial], order: &BlockOrder) -> Result<GroebnerBasis> {
    buchberger_with(gens, order, GroebnerOptions::default())
}

pub fn buchberger_with(gens: &[Polynomial], order: &BlockOrder, options: GroebnerOptions) -> Result<GroebnerBasis> {
    let ring = check_inputs(gens, order)?.ok_or(Error::NoGenerators)?;
    let mut basis: Vec<Vec<Term>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if g.is_unit() {
            return Ok(GroebnerBasis::unit_ideal(ring, order.clone()));
        }
        basis.push(ascending(&g.primitive(order), order));
    }
    if basis.is_empty() {
        return Ok(GroebnerBasis::zero_ideal(ring, order.clone()));
    }

    // pending pairs (i, j), i < j, with the lcm of their leading monomials
    let mut pending: BTreeMap<(usize, usize), Monomial> = BTreeMap::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j), lead(&basis[i]).lcm(lead(&basis[j])));
        }
    }

    // normal strategy: smallest lcm first, ties by index
    while let Some((&(i, j), _)) = pending
        .iter()
        .min_by(|(ka, la), (kb, lb)| order.compare(la, lb).then(ka.1.cmp(&kb.1)).then(ka.0.cmp(&kb.0)))
    {
        let lcm = pending.remove(&(i, j)).expect("selected pair is pending");
        if lead(&basis[i]).is_coprime(lead(&basis[j])) {
            continue;
        }
        if options.chain_criterion && chain_covers(&basis, &pending, i, j, &lcm) {
            continue;
        }
        let s = spoly_terms(&basis[i], &basis[j], order)?;
        let views: Vec<&[Term]> = basis.iter().map(Vec::as_slice).collect();
        let h = reduce(s, &views, order, None)?;
        if h.is_empty() {
            continue;
        }
        let h = primitive_terms(h);
        if lead(&h).is_one() {
            return Ok(GroebnerBasis::unit_ideal(ring, order.clone()));
        }
        let k = basis.len();
        for (idx, g) in basis.iter().enumerate() {
            pending.insert((idx, k), lead(g).lcm(lead(&h)));
        }
        basis.push(h);
    }

    Ok(GroebnerBasis {
        elements: interreduce(&ring, basis, order)?,
        ring,
        order: order.clone(),
        reduced: true,
    })
}

fn lead(terms: &[Term]) -> &Monomial {
    &terms.last().expect("nonzero polynomial").0
}

fn chain_covers(
    basis: &[Vec<Term>],
    pending: &BTreeMap<(usize, usize), Monomial>,
    i: usize,
    j: usize,
    lcm: &Monomial,
) -> bool {
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    (0..basis.len()).any(|k| {
        k != i
            && k != j
            && lead(&basis[k]).divides(lcm)
            && !pending.contains_key(&key(i, k))
            && !pending.contains_key(&key(j, k))
    })
}

/// Scales to coprime integer coefficients with a positive leading one.
fn primitive_terms(terms: Vec<Term>) -> Vec<Term> {
    let den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let num = terms.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()));
    let mut factor = Rational::new(den, num);
    if terms.last().map(|(_, c)| c.is_negative()).unwrap_or(false) {
        factor = -factor;
    }
    terms.into_iter().map(|(m, c)| (m, c * &factor)).collect()
}

/// Minimalizes and fully inter-reduces a Gröbner basis, making every element
/// monic and sorting ascending by leading monomial.
fn interreduce(ring: &Arc<Ring>, mut basis: Vec<Vec<Term>>, order: &BlockOrder) -> Result<Vec<Polynomial>> {
    basis.sort_by(|a, b| order.compare(lead(a), lead(b)));
    let mut minimal: Vec<Vec<Term>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(other, h)| {
            other != idx && lead(h).divides(lead(g)) && (lead(h) != lead(g) || other < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for idx in 0..minimal.len() {
        let others: Vec<&[Term]> = minimal
            .iter()
            .enumerate()
            .filter(|(o, _)| *o != idx)
            .map(|(_, g)| g.as_slice())
            .collect();
        let r = reduce(minimal[idx].clone(), &others, order, None)?;
        out.push(to_poly(ring, r).monic(order));
    }
    Ok(out)
}

/// `f` lies in the ideal of the reduced basis `basis`.
pub fn is_member(f: &Polynomial, basis: &GroebnerBasis) -> Result<bool> {
    basis.contains(f)
}

/// Leading-monomial set used by the dimension routine.
pub(crate) fn leading_supports(basis: &GroebnerBasis) -> BTreeSet<Vec<usize>> {
    basis
        .leading_monomials()
        .iter()
        .map(|m| m.support().collect())
        .collect()
}
