use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Role of a ring variable in a parametric system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// A parameter `u_i`; the projection keeps these coordinates.
    Parameter,
    /// An unknown `x_j`; the projection forgets these coordinates.
    Unknown,
}

/// The polynomial ring `Q[U, X]`: named indeterminates in declaration order,
/// each tagged as parameter or unknown.
///
/// Rings are shared behind an [`Arc`]; the variable list never changes after
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    // Variable indices sorted by name; the order factors are printed in.
    print_order: Vec<usize>,
}

impl Ring {
    /// Builds a ring whose parameters come first, followed by the unknowns.
    pub fn new<S: AsRef<str>>(parameters: &[S], unknowns: &[S]) -> Result<Arc<Ring>> {
        let vars = parameters
            .iter()
            .map(|p| (p.as_ref().to_string(), VarKind::Parameter))
            .chain(
                unknowns
                    .iter()
                    .map(|x| (x.as_ref().to_string(), VarKind::Unknown)),
            )
            .collect();
        Self::from_vars(vars).map(Arc::new)
    }

    /// Builds a ring from an explicit variable sequence.
    pub fn from_vars(vars: Vec<(String, VarKind)>) -> Result<Ring> {
        let mut names = Vec::with_capacity(vars.len());
        let mut kinds = Vec::with_capacity(vars.len());
        for (name, kind) in vars {
            if name.is_empty() {
                return Err(Error::InvalidRing("empty variable name".into()));
            }
            if names.contains(&name) {
                return Err(Error::InvalidRing(format!("duplicate variable `{name}`")));
            }
            names.push(name);
            kinds.push(kind);
        }
        let mut print_order: Vec<usize> = (0..names.len()).collect();
        print_order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        Ok(Ring {
            names,
            kinds,
            print_order,
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, var: usize) -> VarKind {
        self.kinds[var]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Like [`Ring::index_of`], reporting a missing name as an error.
    pub fn var(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Indices of the parameters `U`, in declaration order.
    pub fn parameters(&self) -> Vec<usize> {
        self.indices_of(VarKind::Parameter)
    }

    /// Indices of the unknowns `X`, in declaration order.
    pub fn unknowns(&self) -> Vec<usize> {
        self.indices_of(VarKind::Unknown)
    }

    fn indices_of(&self, kind: VarKind) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.kinds[i] == kind).collect()
    }

    pub(crate) fn print_order(&self) -> &[usize] {
        &self.print_order
    }

    /// Returns this ring with one extra unknown appended, named `base` or a
    /// primed variant of it when `base` is taken.
    pub(crate) fn with_fresh_variable(&self, base: &str) -> Ring {
        let mut name = String::from(base);
        while self.names.contains(&name) {
            name.push('_');
        }
        let mut vars: Vec<(String, VarKind)> = self
            .names
            .iter()
            .cloned()
            .zip(self.kinds.iter().copied())
            .collect();
        vars.push((name, VarKind::Unknown));
        Ring::from_vars(vars).expect("fresh name is unique")
    }
}

/// Rings compare by pointer first and by content second.
pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
