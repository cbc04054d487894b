//! Sparse multivariate polynomials with exact rational coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::order::BlockOrder;
use crate::ring::{same_ring, Ring};

pub type Rational = num_rational::BigRational;

/// A polynomial over `Q` in the variables of a [`Ring`].
///
/// Terms are kept in a map keyed by monomial, with no zero coefficients, so
/// structural equality is polynomial equality. Term orders are applied on
/// demand.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Prints under the ring's `(X > U)` block order.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string(&BlockOrder::elimination(&self.ring)))
    }
}

impl Polynomial {
    pub fn zero(ring: Arc<Ring>) -> Self {
        Polynomial {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Arc<Ring>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: Arc<Ring>, c: Rational) -> Self {
        let n = ring.nvars();
        Self::monomial(ring, Monomial::one(n), c)
    }

    pub fn var(ring: Arc<Ring>, var: usize) -> Self {
        let n = ring.nvars();
        Self::monomial(ring, Monomial::var(n, var, 1), Rational::one())
    }

    pub fn monomial(ring: Arc<Ring>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length differs from ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring, terms }
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms<I>(ring: Arc<Ring>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.nvars(), p.ring.nvars(), "monomial length differs from ring");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// A nonzero constant.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in storage order (not a term order).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Variables occurring in some term, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut used = alloc::vec![false; self.ring.nvars()];
        for m in self.terms.keys() {
            for v in m.support() {
                used[v] = true;
            }
        }
        (0..used.len()).filter(|&v| used[v]).collect()
    }

    pub fn uses_variable(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    /// Every term involves only variables from `vars`.
    pub fn only_in(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|m| m.only_in(vars))
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(self.ring.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.try_mul(m2)?, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplies by the single term `c * m`.
    pub fn try_mul_term(&self, m: &Monomial, c: &Rational) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Polynomial::zero(self.ring.clone()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m1, c1)| Ok((m1.try_mul(m)?, c1 * c)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_pow(&self, mut exp: u32) -> Result<Polynomial> {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.ring.clone());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ring.clone());
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Formal partial derivative with respect to variable index `var`.
    pub fn derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.ring.nvars() {
            return Err(Error::UnknownVariable(alloc::format!("#{var}")));
        }
        let mut out = Polynomial::zero(self.ring.clone());
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.exponents_mut()[var] = e - 1;
            out.add_term(dm, c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// Derivative with respect to a variable given by name.
    pub fn derivative_by_name(&self, name: &str) -> Result<Polynomial> {
        self.derivative(self.ring.var(name)?)
    }

    /// Value at a rational point; `point` assigns every ring variable.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        self.check_assignment(point.len())?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in m.support() {
                t *= num_traits::pow::pow(point[v].clone(), m.exponent(v) as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Value at a point of `F_p^n`. Fails with [`Error::BadPrime`] when a
    /// coefficient denominator is divisible by `modulus`.
    pub fn evaluate_mod(&self, point: &[u64], modulus: u64) -> Result<u64> {
        self.check_assignment(point.len())?;
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = rational_mod(c, modulus)?;
            for v in m.support() {
                t = mul_mod(t, pow_mod(point[v] % modulus, m.exponent(v) as u64, modulus), modulus);
            }
            acc = (acc + t) % modulus;
        }
        Ok(acc)
    }

    fn check_assignment(&self, got: usize) -> Result<()> {
        if got == self.ring.nvars() {
            Ok(())
        } else {
            Err(Error::PartialAssignment {
                expected: self.ring.nvars(),
                got,
            })
        }
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &BlockOrder) -> Vec<(&Monomial, &Rational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.compare(b.0, a.0));
        terms
    }

    /// Scales so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: &BlockOrder) -> Polynomial {
        match self.terms.iter().max_by(|a, b| order.compare(a.0, b.0)) {
            Some((_, lc)) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Scales to coprime integer coefficients with a positive coefficient on
    /// the `order`-leading term.
    pub fn primitive(&self, order: &BlockOrder) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let den_lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num_gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let mut factor = Rational::new(den_lcm, num_gcd);
        let lead = self
            .terms
            .iter()
            .max_by(|a, b| order.compare(a.0, b.0))
            .map(|(_, c)| c)
            .expect("nonzero");
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Re-expresses this polynomial in `target`, sending variable `i` to
    /// `var_map[i]`.
    pub(crate) fn map_ring(&self, target: &Arc<Ring>, var_map: &[usize]) -> Polynomial {
        let n = target.nvars();
        Polynomial::from_terms(
            target.clone(),
            self.terms.iter().map(|(m, c)| {
                let mut e = alloc::vec![0u32; n];
                for v in m.support() {
                    e[var_map[v]] = m.exponent(v);
                }
                (Monomial::from_exponents(e), c.clone())
            }),
        )
    }

    /// Text form with terms in strictly descending `order`.
    ///
    /// Integer coefficients print bare, others as `num/den`; unit
    /// coefficients are omitted on non-constant terms; factors are `*`-joined
    /// in variable-name order with `^` for powers.
    pub fn canonical_string(&self, order: &BlockOrder) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(alloc::format!("{abs}"));
            }
            for &v in self.ring.print_order() {
                match m.exponent(v) {
                    0 => {}
                    1 => factors.push(String::from(self.ring.name(v))),
                    e => factors.push(alloc::format!("{}^{e}", self.ring.name(v))),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

fn rational_mod(c: &Rational, modulus: u64) -> Result<u64> {
    let m = BigInt::from(modulus);
    let num = c.numer().mod_floor(&m).to_u64().expect("reduced below modulus");
    let den = c.denom().mod_floor(&m).to_u64().expect("reduced below modulus");
    if den == 0 {
        return Err(Error::BadPrime(modulus));
    }
    Ok(mul_mod(num, inv_mod(den, modulus), modulus))
}

/// `c mod p` for a rational `c`; a denominator divisible by `p` is an error.
pub fn reduce_coefficient(c: &Rational, modulus: u64) -> Result<u64> {
    rational_mod(c, modulus)
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Fermat inverse; `m` is prime and `a` nonzero mod `m`.
fn inv_mod(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics if the operands live in different rings.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial arithmetic failed")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Minimal expression reader used by unit tests inside this crate:
/// sums of signed products of rationals, names, and `name^k`.
#[cfg(test)]
pub(crate) fn parse_test_poly(ring: &Arc<Ring>, text: &str) -> Polynomial {
    let mut p = Polynomial::zero(ring.clone());
    let normalized = text.replace(' ', "").replace('-', "+-");
    for chunk in normalized.split('+').filter(|s| !s.is_empty()) {
        let (neg, body) = match chunk.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, chunk),
        };
        let mut coeff = Rational::one();
        let mut m = Monomial::one(ring.nvars());
        for factor in body.split('*') {
            if factor.starts_with(|c: char| c.is_ascii_digit()) {
                let mut parts = factor.split('/');
                let num: BigInt = parts.next().unwrap().parse().unwrap();
                let den: BigInt = parts.next().map(|d| d.parse().unwrap()).unwrap_or_else(BigInt::one);
                coeff *= Rational::new(num, den);
            } else {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().unwrap()),
                    None => (factor, 1),
                };
                let v = ring.var(name).unwrap_or_else(|_| panic!("unknown {}", name));
                m.exponents_mut()[v] += exp;
            }
        }
        if neg {
            coeff = -coeff;
        }
        p.add_term(m, coeff);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> Arc<Ring> {
        Ring::new(&["r", "a"], &["x", "y"]).unwrap()
    }

    fn p(text: &str) -> Polynomial {
        parse_test_poly(&ring(), text)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_cancels() {
        assert_eq!(p("x + y") + p("x - y"), p("2*x"));
        assert!((p("x^2 + 3*a") * Polynomial::zero(ring())).is_zero());
        assert_eq!(p("r^2 - a") + p("a"), p("r^2"));
        assert_eq!(-p("x - 1"), p("1 - x"));
        assert_eq!(p("x + 1").try_pow(2).unwrap(), p("x^2 + 2*x + 1"));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let other = Ring::new(&["r", "a"], &["x", "z"]).unwrap();
        let z = Polynomial::var(other, 3);
        assert_eq!(p("x").try_add(&z), Err(Error::RingMismatch));
        assert_eq!(p("x").try_mul(&z), Err(Error::RingMismatch));
    }

    #[test]
    fn power_rule() {
        assert_eq!(p("a*x^2*y").derivative_by_name("x").unwrap(), p("2*a*x*y"));
        assert_eq!(p("5*a*y^3").derivative_by_name("y").unwrap(), p("15*a*y^2"));
        assert_eq!(p("a - r^2").derivative_by_name("r").unwrap(), p("-2*r"));
        assert!(matches!(
            p("x").derivative_by_name("w"),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn rational_evaluation() {
        let ring = Ring::new::<&str>(&["r", "a"], &[]).unwrap();
        let f = parse_test_poly(&ring, "r^2 - a");
        assert_eq!(f.evaluate(&[q(2, 1), q(4, 1)]).unwrap(), q(0, 1));
        assert_eq!(f.evaluate(&[q(1, 1), q(0, 1)]).unwrap(), q(1, 1));
        assert_eq!(
            f.evaluate(&[q(1, 1)]),
            Err(Error::PartialAssignment {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn modular_evaluation() {
        let ring = Ring::new::<&str>(&[], &["x"]).unwrap();
        let f = parse_test_poly(&ring, "x^2 - 1");
        assert_eq!(f.evaluate_mod(&[4], 5).unwrap(), 0);
        assert_eq!(f.evaluate_mod(&[2], 5).unwrap(), 3);
        let g = parse_test_poly(&ring, "1/5*x");
        assert_eq!(g.evaluate_mod(&[1], 5), Err(Error::BadPrime(5)));
        let h = parse_test_poly(&ring, "1/2*x");
        // 2^{-1} = 4 mod 7
        assert_eq!(h.evaluate_mod(&[1], 7).unwrap(), 4);
    }

    #[test]
    fn canonical_strings() {
        let ring2 = Ring::new::<&str>(&["r", "a"], &[]).unwrap();
        let rev = BlockOrder::degrevlex(&ring2);
        assert_eq!(parse_test_poly(&ring2, "r^2 - a").canonical_string(&rev), "r^2 - a");
        assert_eq!(Polynomial::zero(ring2.clone()).canonical_string(&rev), "0");

        let elim = BlockOrder::elimination(&ring());
        assert_eq!(
            p("a*x^2*y + 5*a*y^3 - a*r").canonical_string(&elim),
            "a*x^2*y + 5*a*y^3 - a*r"
        );
        assert_eq!(p("-3/2*x + 7").canonical_string(&elim), "-3/2*x + 7");
        assert_eq!(p("-1").canonical_string(&elim), "-1");
        assert_eq!(p("1/3").canonical_string(&elim), "1/3");
    }

    #[test]
    fn primitive_part() {
        let elim = BlockOrder::elimination(&ring());
        assert_eq!(p("-2/3*x + 4/9").primitive(&elim), p("3*x - 2"));
        assert_eq!(p("6*x*y - 4").monic(&elim), p("x*y - 2/3"));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -5i64..=5, 1i64..=3), 0..5)
            .prop_map(|terms| {
                Polynomial::from_terms(
                    ring(),
                    terms.into_iter().map(|((e0, e1, e2, e3), n, d)| {
                        (
                            Monomial::from_exponents(alloc::vec![e0, e1, e2, e3]),
                            q(n, d),
                        )
                    }),
                )
            })
    }

    fn arb_point() -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d)), 4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), pt in arb_point()) {
            let va = a.evaluate(&pt).unwrap();
            let vb = b.evaluate(&pt).unwrap();
            prop_assert_eq!((&a * &b).evaluate(&pt).unwrap(), &va * &vb);
            prop_assert_eq!((&a + &b).evaluate(&pt).unwrap(), va + vb);
        }

        #[test]
        fn leibniz_rule(a in arb_poly(), b in arb_poly(), var in 0usize..4) {
            let lhs = (&a * &b).derivative(var).unwrap();
            let rhs = &(&a.derivative(var).unwrap() * &b) + &(&a * &b.derivative(var).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn modular_evaluation_matches_rational(a in arb_poly(), pt in proptest::collection::vec(0u64..7, 4)) {
            // denominators are at most 3, so 7 is always a good prime
            let exact = a.evaluate(&pt.iter().map(|&v| q(v as i64, 1)).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(a.evaluate_mod(&pt, 7).unwrap(), reduce_coefficient(&exact, 7).unwrap());
        }
    }
}
