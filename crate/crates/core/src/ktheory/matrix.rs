//! Sparse operator matrices over `Z[q, q^-1]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{basis_states, BasisState};
use crate::diagram::StrandSeq;
use crate::laurent::LaurentPoly;

/// Matrix of a map from the module on `domain` to the one on `codomain`,
/// keyed by `(row, col)` = (codomain state, domain state).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    domain: StrandSeq,
    codomain: StrandSeq,
    entries: BTreeMap<(BasisState, BasisState), LaurentPoly>,
}

impl OperatorMatrix {
    pub fn zero(domain: StrandSeq, codomain: StrandSeq) -> Self {
        Self {
            domain,
            codomain,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(seq: StrandSeq) -> Self {
        let mut out = Self::zero(seq.clone(), seq.clone());
        for s in basis_states(seq.m(), seq.len()) {
            out.entries.insert((s.clone(), s), LaurentPoly::one());
        }
        out
    }

    pub fn domain(&self) -> &StrandSeq {
        &self.domain
    }

    pub fn codomain(&self) -> &StrandSeq {
        &self.codomain
    }

    pub fn entries(&self) -> &BTreeMap<(BasisState, BasisState), LaurentPoly> {
        &self.entries
    }

    pub fn get(&self, row: &BasisState, col: &BasisState) -> LaurentPoly {
        self.entries
            .get(&(row.clone(), col.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `c` to the entry at `(row, col)`.
    pub fn insert(&mut self, row: BasisState, col: BasisState, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let key = (row, col);
        let slot = self.entries.entry(key.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    fn same_shape(&self, other: &OperatorMatrix) {
        assert!(
            self.domain == other.domain && self.codomain == other.codomain,
            "matrix shapes differ: {}->{} vs {}->{}",
            self.domain,
            self.codomain,
            other.domain,
            other.codomain
        );
    }

    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.same_shape(other);
        let mut out = self.clone();
        for ((r, c), v) in &other.entries {
            out.insert(r.clone(), c.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.add(&other.scale(&LaurentPoly::from(-1)))
    }

    pub fn scale(&self, p: &LaurentPoly) -> OperatorMatrix {
        let mut out = Self::zero(self.domain.clone(), self.codomain.clone());
        for ((r, c), v) in &self.entries {
            out.insert(r.clone(), c.clone(), v * p);
        }
        out
    }

    /// `later * self`: apply `self` first, then `later`.
    pub fn then(&self, later: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(
            self.codomain, later.domain,
            "cannot compose: codomain {} vs domain {}",
            self.codomain, later.domain
        );
        let mut by_col: BTreeMap<&BasisState, Vec<(&BasisState, &LaurentPoly)>> = BTreeMap::new();
        for ((r, c), v) in &later.entries {
            by_col.entry(c).or_default().push((r, v));
        }
        let mut out = Self::zero(self.domain.clone(), later.codomain.clone());
        for ((mid, col), v) in &self.entries {
            if let Some(list) = by_col.get(mid) {
                for (row, w) in list {
                    out.insert((*row).clone(), col.clone(), *w * v);
                }
            }
        }
        out
    }

    /// Stable text dump: header `m n_bottom n_top`, then one line
    /// `row col poly` per nonzero entry, sorted by row then column.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {}",
            self.domain.m(),
            self.domain.len(),
            self.codomain.len()
        );
        for ((r, c), v) in &self.entries {
            let _ = writeln!(out, "{r} {c} {v}");
        }
        out
    }
}
