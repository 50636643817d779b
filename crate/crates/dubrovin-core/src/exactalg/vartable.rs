//! Variable tables: ordered names with per-variable weights.

use crate::error::DubrovinError;
use crate::Result;
use std::sync::Arc;

/// An ordered list of variable names with positive integer weights.
///
/// The standard table for `WP^{3g-1}` is `u_1..u_g, v_1..v_g, w_1..w_g`
/// with weights `1, 2, 3`; the big table appends `c, d` with weights `2, 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    weights: Vec<i64>,
}

impl VarTable {
    pub fn new(names: Vec<String>, weights: Vec<i64>) -> Result<Arc<Self>> {
        if names.len() != weights.len() {
            return Err(DubrovinError::VarTableMismatch(format!(
                "{} names vs {} weights",
                names.len(),
                weights.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(DubrovinError::VarTableMismatch(format!(
                    "duplicate variable `{n}`"
                )));
            }
        }
        if weights.iter().any(|&w| w <= 0) {
            return Err(DubrovinError::VarTableMismatch(
                "weights must be positive".into(),
            ));
        }
        Ok(Arc::new(VarTable { names, weights }))
    }

    /// `u_1..u_g, v_1..v_g, w_1..w_g` with weights `(1,2,3)` per block.
    pub fn uvw(g: usize) -> Arc<Self> {
        let mut names = Vec::with_capacity(3 * g);
        let mut weights = Vec::with_capacity(3 * g);
        for (block, w) in [("u", 1i64), ("v", 2), ("w", 3)] {
            for i in 1..=g {
                names.push(format!("{block}{i}"));
                weights.push(w);
            }
        }
        VarTable::new(names, weights).expect("uvw table is well formed")
    }

    /// The big table `u.., v.., w.., c, d` with `deg c = 2`, `deg d = 4`.
    pub fn uvwcd(g: usize) -> Arc<Self> {
        let base = VarTable::uvw(g);
        let mut names = base.names.clone();
        let mut weights = base.weights.clone();
        names.push("c".into());
        names.push("d".into());
        weights.push(2);
        weights.push(4);
        VarTable::new(names, weights).expect("uvwcd table is well formed")
    }

    /// `u_1..u_g` alone (canonical `P^{g-1}` coordinates).
    pub fn u_only(g: usize) -> Arc<Self> {
        let names = (1..=g).map(|i| format!("u{i}")).collect();
        VarTable::new(names, vec![1; g]).expect("u table is well formed")
    }

    /// Plane-curve coordinates.
    pub fn xy() -> Arc<Self> {
        VarTable::new(vec!["x".into(), "y".into()], vec![1, 1]).expect("xy")
    }

    /// Group parameters plus plane-curve coordinates, for symbolic
    /// membership checks in `K[a,b,c]`.
    pub fn abcxy() -> Arc<Self> {
        VarTable::new(
            vec!["a".into(), "b".into(), "c".into(), "x".into(), "y".into()],
            vec![1, 1, 1, 1, 1],
        )
        .expect("abcxy")
    }

    /// The secondary weight vector of the toric degeneration:
    /// `weight(u_i) = 0, weight(v_i) = 1, weight(w_i) = 2` (and 0 for any
    /// extra variables such as `c, d`).
    pub fn initial_weights(&self) -> Vec<i64> {
        self.names
            .iter()
            .map(|n| match n.chars().next() {
                Some('v') => 1,
                Some('w') => 2,
                _ => 0,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| DubrovinError::UnknownVariable(name.into()))
    }
}
