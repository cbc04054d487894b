//! Degree-reverse-lexicographic block orders.
//!
//! A [`BlockOrder`] compares monomials block by block, first block first.
//! Inside a block the comparison is degrevlex over the block's variable
//! sequence. The two-block order with the unknowns first is an elimination
//! order for the unknowns; restricted to parameter-only polynomials it is
//! plain degrevlex on the parameters.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{Polynomial, Rational};
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockOrder {
    blocks: Vec<Vec<usize>>,
    nvars: usize,
}

impl BlockOrder {
    /// Builds an order from variable blocks; empty blocks are dropped. The
    /// blocks must partition `0..nvars`.
    pub fn new(blocks: Vec<Vec<usize>>, nvars: usize) -> Result<Self> {
        let blocks: Vec<Vec<usize>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        let mut seen = alloc::vec![false; nvars];
        for &v in blocks.iter().flatten() {
            if v >= nvars {
                return Err(Error::OrderMismatch(format!(
                    "variable index {v} outside a ring of {nvars} variables"
                )));
            }
            if seen[v] {
                return Err(Error::OrderMismatch(format!(
                    "variable index {v} appears in two blocks"
                )));
            }
            seen[v] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::OrderMismatch(
                "blocks do not cover every variable".into(),
            ));
        }
        Ok(BlockOrder { blocks, nvars })
    }

    /// Single-block degrevlex in declaration order.
    pub fn degrevlex(ring: &Ring) -> Self {
        BlockOrder::new(alloc::vec![(0..ring.nvars()).collect()], ring.nvars())
            .expect("one block covers the ring")
    }

    /// The `(X > U)` order: unknowns block first, parameters block second.
    pub fn elimination(ring: &Ring) -> Self {
        BlockOrder::new(alloc::vec![ring.unknowns(), ring.parameters()], ring.nvars())
            .expect("unknowns and parameters partition the ring")
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub(crate) fn check_ring(&self, ring: &Ring) -> Result<()> {
        if ring.nvars() == self.nvars {
            Ok(())
        } else {
            Err(Error::OrderMismatch(format!(
                "order covers {} variables, ring has {}",
                self.nvars,
                ring.nvars()
            )))
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), self.nvars);
        debug_assert_eq!(b.nvars(), self.nvars);
        for block in &self.blocks {
            let ord = degrevlex(a, b, block);
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }

    /// [`BlockOrder::compare`] with a ring-size check.
    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != self.nvars || b.nvars() != self.nvars {
            return Err(Error::RingMismatch);
        }
        Ok(self.compare(a, b))
    }
}

fn degrevlex(a: &Monomial, b: &Monomial, vars: &[usize]) -> Ordering {
    let da = a.degree_in(vars);
    let db = b.degree_in(vars);
    if da != db {
        return da.cmp(&db);
    }
    for &v in vars.iter().rev() {
        let (ea, eb) = (a.exponent(v), b.exponent(v));
        if ea != eb {
            // smaller exponent on the later variable is the larger monomial
            return eb.cmp(&ea);
        }
    }
    Ordering::Equal
}

/// The `order`-maximal term of `p`.
pub fn leading_term(p: &Polynomial, order: &BlockOrder) -> Result<(Monomial, Rational)> {
    order.check_ring(p.ring())?;
    p.terms()
        .max_by(|(m1, _), (m2, _)| order.compare(m1, m2))
        .map(|(m, c)| (m.clone(), c.clone()))
        .ok_or(Error::ZeroPolynomial)
}

/// Splits off the unknowns' part of the leading monomial under `order`.
///
/// Returns `(x_part, lc_x)` where `x_part` is the leading monomial with
/// parameter exponents zeroed, and `lc_x` gathers every term of `p` whose
/// unknowns' part equals `x_part`, with that part divided out. `lc_x` only
/// involves parameters.
pub fn split_leading_x(p: &Polynomial, order: &BlockOrder) -> Result<(Monomial, Polynomial)> {
    let unknowns = p.ring().unknowns();
    let (lead, _) = leading_term(p, order)?;
    let x_part = lead.restrict(&unknowns);
    let params = p.ring().parameters();
    let lc = Polynomial::from_terms(
        p.ring().clone(),
        p.terms()
            .filter(|(m, _)| m.restrict(&unknowns) == x_part)
            .map(|(m, c)| (m.restrict(&params), c.clone())),
    );
    Ok((x_part, lc))
}
