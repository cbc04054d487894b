//! Ideal-level operations: elimination, saturation, Krull dimension,
//! Jacobian matrices and their minor ideals.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, leading_supports, GroebnerBasis};
use crate::order::BlockOrder;
use crate::poly::Polynomial;
use crate::ring::{same_ring, Ring};

/// An ideal given by generators, with reduced Gröbner bases cached per order.
///
/// The cache is filled through `&mut self`, so a shared `Ideal` is never
/// mutated behind another reader's back.
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    gb_cache: BTreeMap<BlockOrder, GroebnerBasis>,
}

impl Ideal {
    pub fn new(ring: Arc<Ring>, generators: Vec<Polynomial>) -> Result<Self> {
        if generators.iter().any(|g| !same_ring(&ring, g.ring())) {
            return Err(Error::RingMismatch);
        }
        Ok(Ideal {
            ring,
            generators,
            gb_cache: BTreeMap::new(),
        })
    }

    pub fn zero(ring: Arc<Ring>) -> Self {
        Ideal {
            ring,
            generators: Vec::new(),
            gb_cache: BTreeMap::new(),
        }
    }

    pub fn unit(ring: Arc<Ring>) -> Self {
        let one = Polynomial::one(ring.clone());
        Ideal {
            ring,
            generators: alloc::vec![one],
            gb_cache: BTreeMap::new(),
        }
    }

    /// The ideal generated by a basis, with that basis pre-cached.
    pub fn from_basis(basis: GroebnerBasis) -> Self {
        let mut gb_cache = BTreeMap::new();
        let generators = basis.elements().to_vec();
        let ring = basis.ring().clone();
        gb_cache.insert(basis.order().clone(), basis);
        Ideal {
            ring,
            generators,
            gb_cache,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn into_generators(self) -> Vec<Polynomial> {
        self.generators
    }

    pub fn cached_basis(&self, order: &BlockOrder) -> Option<&GroebnerBasis> {
        self.gb_cache.get(order)
    }

    /// The reduced basis under `order`, computed once and cached.
    pub fn groebner_basis(&mut self, order: &BlockOrder) -> Result<&GroebnerBasis> {
        if !self.gb_cache.contains_key(order) {
            let gb = compute_basis(&self.ring, &self.generators, order)?;
            self.gb_cache.insert(order.clone(), gb);
        }
        Ok(&self.gb_cache[order])
    }

    /// The reduced basis under `order` without touching the cache.
    pub fn basis(&self, order: &BlockOrder) -> Result<GroebnerBasis> {
        match self.gb_cache.get(order) {
            Some(gb) => Ok(gb.clone()),
            None => compute_basis(&self.ring, &self.generators, order),
        }
    }

    pub fn is_unit(&mut self) -> Result<bool> {
        let order = BlockOrder::elimination(&self.ring);
        Ok(self.groebner_basis(&order)?.is_unit())
    }

    /// `self + other`.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend_from_slice(&other.generators);
        Ideal::new(self.ring.clone(), gens)
    }

    /// `self * other`; its variety is the union of the two varieties.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for f in &self.generators {
            for g in &other.generators {
                gens.push(f.try_mul(g)?);
            }
        }
        Ideal::new(self.ring.clone(), gens)
    }
}

fn compute_basis(ring: &Arc<Ring>, gens: &[Polynomial], order: &BlockOrder) -> Result<GroebnerBasis> {
    order.check_ring(ring)?;
    if gens.is_empty() {
        return Ok(GroebnerBasis::zero_ideal(ring.clone(), order.clone()));
    }
    buchberger(gens, order)
}

/// Whether `b` is contained in `a`: every generator of `b` reduces to zero
/// against `a`'s basis under `order`.
pub fn ideal_contains(a: &mut Ideal, b: &Ideal, order: &BlockOrder) -> Result<bool> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    let gb = a.groebner_basis(order)?;
    for g in b.generators() {
        if !gb.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_leading_block(basis: &GroebnerBasis, drop: &[usize]) -> Result<()> {
    let first = basis.order().blocks().first();
    let mut expected: Vec<usize> = drop.to_vec();
    expected.sort_unstable();
    let mut got: Vec<usize> = first.cloned().unwrap_or_default();
    got.sort_unstable();
    if expected == got {
        Ok(())
    } else {
        Err(Error::OrderMismatch(
            "the dropped variables must form the first block of the order".into(),
        ))
    }
}

/// Elements of `basis` free of the `drop` variables. With the dropped
/// variables as the leading block of the basis order, these form a reduced
/// Gröbner basis of the elimination ideal.
pub fn eliminate(basis: &GroebnerBasis, drop: &[usize]) -> Result<Vec<Polynomial>> {
    Ok(eliminate_basis(basis, drop)?.into_elements())
}

/// [`eliminate`], keeping the result wrapped as a basis under the same order.
pub fn eliminate_basis(basis: &GroebnerBasis, drop: &[usize]) -> Result<GroebnerBasis> {
    if drop.is_empty() {
        return Ok(basis.clone());
    }
    check_leading_block(basis, drop)?;
    let kept = basis
        .elements()
        .iter()
        .filter(|g| drop.iter().all(|&v| !g.uses_variable(v)))
        .cloned()
        .collect();
    Ok(GroebnerBasis::from_reduced(
        basis.ring().clone(),
        basis.order().clone(),
        kept,
    ))
}

/// `<gens> : f^inf` via a fresh variable `t`: the basis of
/// `gens + <1 - t*f>` under `[t] > X > U`, with `t` eliminated.
///
/// The returned ideal carries its reduced basis under the ring's `(X > U)`
/// order.
pub fn saturate(ring: &Arc<Ring>, gens: &[Polynomial], f: &Polynomial) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if gens.iter().chain(core::iter::once(f)).any(|g| !same_ring(ring, g.ring())) {
        return Err(Error::RingMismatch);
    }
    let n = ring.nvars();
    let ext = Arc::new(ring.with_fresh_variable("t"));
    let t = n;
    let embed: Vec<usize> = (0..n).collect();
    let order = BlockOrder::new(
        alloc::vec![alloc::vec![t], ring.unknowns(), ring.parameters()],
        n + 1,
    )?;
    let mut lifted: Vec<Polynomial> = gens.iter().map(|g| g.map_ring(&ext, &embed)).collect();
    let tf = Polynomial::var(ext.clone(), t).try_mul(&f.map_ring(&ext, &embed))?;
    lifted.push(Polynomial::one(ext.clone()).try_sub(&tf)?);
    let gb = buchberger(&lifted, &order)?;
    let back: Vec<usize> = (0..=n).map(|v| if v == t { usize::MAX } else { v }).collect();
    let kept: Vec<Polynomial> = eliminate(&gb, &[t])?
        .iter()
        .map(|g| g.map_ring(ring, &back))
        .collect();
    Ok(Ideal::from_basis(GroebnerBasis::from_reduced(
        ring.clone(),
        BlockOrder::elimination(ring),
        kept,
    )))
}

/// Krull dimension of `Q[vars] / <basis>`, assuming the basis lives in
/// `Q[vars]`: the largest `S ⊆ vars` such that no leading monomial is
/// supported inside `S`. The unit ideal reports `-1`.
pub fn dimension(basis: &GroebnerBasis, vars: &[usize]) -> i64 {
    if basis.is_unit() {
        return -1;
    }
    let supports = leading_supports(basis);
    assert!(vars.len() < 32, "subset enumeration limited to 31 variables");
    let mut best = 0i64;
    for mask in 0u32..(1u32 << vars.len()) {
        let size = i64::from(mask.count_ones());
        if size <= best {
            continue;
        }
        let inside = |v: &usize| {
            vars.iter()
                .position(|w| w == v)
                .map(|i| mask & (1 << i) != 0)
                .unwrap_or(false)
        };
        if supports.iter().all(|s| !s.iter().all(inside)) {
            best = size;
        }
    }
    best
}

/// Matrix of partial derivatives: one row per generator, one column per
/// chosen variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianMatrix {
    ring: Arc<Ring>,
    columns: Vec<usize>,
    entries: Vec<Vec<Polynomial>>,
}

impl JacobianMatrix {
    /// A matrix with arbitrary polynomial entries; every row must have
    /// `ncols` entries.
    pub fn from_rows(ring: Arc<Ring>, ncols: usize, entries: Vec<Vec<Polynomial>>) -> Result<Self> {
        for row in &entries {
            if row.len() != ncols {
                return Err(Error::OrderMismatch("ragged matrix".into()));
            }
            if row.iter().any(|e| !same_ring(&ring, e.ring())) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(JacobianMatrix {
            ring,
            columns: (0..ncols).collect(),
            entries,
        })
    }

    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// Variable index of each column (for matrices built by [`jacobian`]).
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    /// Determinant of the submatrix on `rows` x `cols` by cofactor expansion.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
        debug_assert_eq!(rows.len(), cols.len());
        if rows.is_empty() {
            return Ok(Polynomial::one(self.ring.clone()));
        }
        let (r0, rest) = rows.split_first().expect("nonempty");
        let mut det = Polynomial::zero(self.ring.clone());
        for (j, &c) in cols.iter().enumerate() {
            let a = &self.entries[*r0][c];
            if a.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, &c)| c).collect();
            let term = a.try_mul(&self.minor(rest, &sub_cols)?)?;
            det = if j % 2 == 0 { det.try_add(&term)? } else { det.try_sub(&term)? };
        }
        Ok(det)
    }
}

/// Jacobian of `gens` with respect to the variables `vars`.
pub fn jacobian(ring: &Arc<Ring>, gens: &[Polynomial], vars: &[usize]) -> Result<JacobianMatrix> {
    if vars.is_empty() {
        return Err(Error::EmptyVariableSet);
    }
    if let Some(&v) = vars.iter().find(|&&v| v >= ring.nvars()) {
        return Err(Error::UnknownVariable(alloc::format!("#{v}")));
    }
    let entries = gens
        .iter()
        .map(|g| {
            if !same_ring(ring, g.ring()) {
                return Err(Error::RingMismatch);
            }
            vars.iter().map(|&v| g.derivative(v)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JacobianMatrix {
        ring: ring.clone(),
        columns: vars.to_vec(),
        entries,
    })
}

/// Ideal of all `k x k` minors of `matrix`, each made primitive; zero minors
/// are dropped.
///
/// If `k <= 0` or `k` exceeds both dimensions' minimum, the result is the
/// unit ideal (an empty locus), not the zero ideal.
pub fn minors_ideal(matrix: &JacobianMatrix, k: i64) -> Result<Ideal> {
    let limit = matrix.nrows().min(matrix.ncols()) as i64;
    if k <= 0 || k > limit {
        return Ok(Ideal::unit(matrix.ring.clone()));
    }
    let k = k as usize;
    let order = BlockOrder::elimination(&matrix.ring);
    let mut gens = Vec::new();
    for rows in subsets(matrix.nrows(), k) {
        for cols in subsets(matrix.ncols(), k) {
            let m = matrix.minor(&rows, &cols)?;
            if !m.is_zero() {
                let m = m.primitive(&order);
                if !gens.contains(&m) {
                    gens.push(m);
                }
            }
        }
    }
    Ideal::new(matrix.ring.clone(), gens)
}

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

/// Product of all polynomials in `fs`; the empty product is 1.
pub fn product(ring: &Arc<Ring>, fs: &[Polynomial]) -> Result<Polynomial> {
    fs.iter()
        .try_fold(Polynomial::one(ring.clone()), |acc, f| acc.try_mul(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_test_poly, Rational};
    use proptest::prelude::*;

    fn ring4() -> Arc<Ring> {
        Ring::new(&["r", "a"], &["x", "y"]).unwrap()
    }

    fn polys(ring: &Arc<Ring>, texts: &[&str]) -> Vec<Polynomial> {
        texts.iter().map(|t| parse_test_poly(ring, t)).collect()
    }

    fn strings(ps: &[Polynomial], order: &BlockOrder) -> Vec<alloc::string::String> {
        ps.iter().map(|p| p.canonical_string(order)).collect()
    }

    #[test]
    fn elimination_examples() {
        let ring = ring4();
        let elim = BlockOrder::elimination(&ring);
        let gb = buchberger(&polys(&ring, &["r^2 - a", "x^2*y + 5*y^3 - r"]), &elim).unwrap();
        let x = ring.unknowns();
        assert_eq!(strings(&eliminate(&gb, &x).unwrap(), &elim), ["r^2 - a"]);

        let ring = Ring::new(&["u"], &["x"]).unwrap();
        let elim = BlockOrder::elimination(&ring);
        let x = ring.unknowns();
        let gb = buchberger(&polys(&ring, &["x - u"]), &elim).unwrap();
        assert!(eliminate(&gb, &x).unwrap().is_empty());
        let gb = buchberger(&polys(&ring, &["x", "x - u"]), &elim).unwrap();
        assert_eq!(strings(&eliminate(&gb, &x).unwrap(), &elim), ["u"]);
        // dropping the parameters needs them in the leading block
        assert!(matches!(
            eliminate(&gb, &ring.parameters()),
            Err(Error::OrderMismatch(_))
        ));
    }

    #[test]
    fn saturation_examples() {
        let ring = ring4();
        let elim = BlockOrder::elimination(&ring);
        let e = polys(&ring, &["a*x^2*y + 5*a*y^3 - r^3", "a - r^2"]);
        let sat = saturate(&ring, &e, &parse_test_poly(&ring, "r")).unwrap();
        assert_eq!(
            strings(sat.generators(), &elim),
            ["r^2 - a", "x^2*y + 5*y^3 - r"]
        );

        let f = parse_test_poly(&ring, "x*y - a");
        let mut unit = saturate(&ring, core::slice::from_ref(&f), &f).unwrap();
        assert!(unit.is_unit().unwrap());

        let one = Polynomial::one(ring.clone());
        let same = saturate(&ring, &e, &one).unwrap();
        assert_eq!(same.generators(), buchberger(&e, &elim).unwrap().elements());

        assert_eq!(
            saturate(&ring, &e, &Polynomial::zero(ring.clone())).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn saturation_certificate() {
        let ring = ring4();
        let elim = BlockOrder::elimination(&ring);
        let e = polys(&ring, &["a*x^2*y + 5*a*y^3 - r^3", "a - r^2"]);
        let f = parse_test_poly(&ring, "r");
        let sat = saturate(&ring, &e, &f).unwrap();
        let gb_e = buchberger(&e, &elim).unwrap();
        for g in &e {
            assert!(sat.cached_basis(&elim).unwrap().contains(g).unwrap());
        }
        for g in sat.generators() {
            let t = (0..=10u32)
                .find(|&t| gb_e.contains(&g.try_mul(&f.try_pow(t).unwrap()).unwrap()).unwrap());
            assert!(t.is_some(), "{g} has no certificate");
        }
    }

    #[test]
    fn dimension_examples() {
        let ring = Ring::new::<&str>(&["r", "a"], &[]).unwrap();
        let o = BlockOrder::degrevlex(&ring);
        let all = [0, 1];
        assert_eq!(dimension(&buchberger(&polys(&ring, &["r^2 - a"]), &o).unwrap(), &all), 1);
        assert_eq!(dimension(&GroebnerBasis::zero_ideal(ring.clone(), o.clone()), &all), 2);
        assert_eq!(dimension(&buchberger(&polys(&ring, &["r", "a"]), &o).unwrap(), &all), 0);
        assert_eq!(dimension(&GroebnerBasis::unit_ideal(ring.clone(), o.clone()), &all), -1);
    }

    #[test]
    fn jacobian_examples() {
        let ring = ring4();
        let ra = ring.parameters();
        let xy = ring.unknowns();
        let j = jacobian(&ring, &polys(&ring, &["r^2 - a"]), &ra).unwrap();
        assert_eq!(j.rows(), [polys(&ring, &["2*r", "-1"])]);
        let j = jacobian(&ring, &polys(&ring, &["a*x^2*y + 5*a*y^3 - r^3", "a - r^2"]), &xy).unwrap();
        assert_eq!(
            j.rows(),
            [polys(&ring, &["2*a*x*y", "a*x^2 + 15*a*y^2"]), polys(&ring, &["0", "0"])]
        );
        let j = jacobian(&ring, &polys(&ring, &["x^2*y + 5*y^3 - r"]), &xy).unwrap();
        assert_eq!(j.rows(), [polys(&ring, &["2*x*y", "x^2 + 15*y^2"])]);
        assert_eq!(jacobian(&ring, &[], &[]), Err(Error::EmptyVariableSet));
    }

    #[test]
    fn minors_examples() {
        let ring = ring4();
        let identity = JacobianMatrix::from_rows(
            ring.clone(),
            2,
            alloc::vec![polys(&ring, &["1", "0"]), polys(&ring, &["0", "1"])],
        )
        .unwrap();
        assert!(minors_ideal(&identity, 2).unwrap().is_unit().unwrap());

        let j = jacobian(&ring, &polys(&ring, &["r^2 - a"]), &ring.parameters()).unwrap();
        let m = minors_ideal(&j, 1).unwrap();
        assert_eq!(m.generators(), polys(&ring, &["r", "1"]).as_slice());
        assert!(m.clone().is_unit().unwrap());

        let mut big = minors_ideal(&identity, 3).unwrap();
        assert!(big.is_unit().unwrap());
        assert!(minors_ideal(&identity, 0).unwrap().is_unit().unwrap());

        // all minors vanish: the zero ideal, not the unit ideal
        let zero = JacobianMatrix::from_rows(ring.clone(), 1, alloc::vec![polys(&ring, &["0"])]).unwrap();
        assert!(minors_ideal(&zero, 1).unwrap().generators().is_empty());
    }

    #[test]
    fn containment_examples() {
        let ring = Ring::new::<&str>(&["r", "a"], &[]).unwrap();
        let o = BlockOrder::degrevlex(&ring);
        let mut ar = Ideal::new(ring.clone(), polys(&ring, &["a", "r"])).unwrap();
        let mut para = Ideal::new(ring.clone(), polys(&ring, &["r^2 - a"])).unwrap();
        assert!(ideal_contains(&mut ar, &para, &o).unwrap());
        assert!(!ideal_contains(&mut para, &ar, &o).unwrap());
        assert!(ideal_contains(&mut para, &Ideal::zero(ring.clone()), &o).unwrap());
    }

    fn permutation_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i64;
        loop {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            total += sign * (0..n).map(|i| m[i][perm[i]]).product::<i64>();
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        total
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn minors_match_permutation_expansion(
            n in 1usize..=4,
            entries in proptest::collection::vec(-5i64..=5, 16),
        ) {
            let ring = Ring::new::<&str>(&[], &["x"]).unwrap();
            let m: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 4..i * 4 + n].to_vec()).collect();
            let matrix = JacobianMatrix::from_rows(
                ring.clone(),
                n,
                m.iter()
                    .map(|row| row.iter().map(|&v| Polynomial::constant(ring.clone(), Rational::from_integer(v.into()))).collect())
                    .collect(),
            ).unwrap();
            let rows: Vec<usize> = (0..n).collect();
            let det = matrix.minor(&rows, &rows).unwrap();
            prop_assert_eq!(det, Polynomial::constant(ring.clone(), Rational::from_integer(permutation_det(&m).into())));
            for k in 1..=n {
                for rs in subsets(n, k) {
                    for cs in subsets(n, k) {
                        let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                        let expect = Rational::from_integer(permutation_det(&sub).into());
                        prop_assert_eq!(matrix.minor(&rs, &cs).unwrap(), Polynomial::constant(ring.clone(), expect));
                    }
                }
            }
        }
    }
}
