//! Operator engine on the Grothendieck-group basis.
//!
//! A strand sequence of length `n` carries the free `Z[q, q^-1]`-module with
//! basis indexed by functions `delta: {1..n} -> {0..m-1}`. Each generator acts
//! by an explicit formula: caps and cups directly, dumbbells and crossings
//! through cached two-slot tables ([`tables`]).

pub mod matrix;
pub mod tables;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::diagram::{
    dual_like_composite, unlike_composite, CapOrder, CrossingType, DiagramError, Generator, Label,
    StrandSeq, TangleWord,
};
use crate::laurent::LaurentPoly;

pub use matrix::OperatorMatrix;
use tables::LocalOp;

/// Default bound on `rows * cols` for materialized matrices.
pub const DEFAULT_MATRIX_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("vector lives on {found} but the word starts at {expected}")]
    SequenceMismatch { expected: String, found: String },
    #[error("state {state} is not a basis state for m={m} on {len} strands")]
    InvalidState { state: String, m: u32, len: usize },
    #[error("slot {slot} carries {found} labels; use the {found} crossing")]
    WrongCrossingKind { slot: usize, found: &'static str },
    #[error("matrix would have {entries} entries, above the cap of {cap}")]
    DimensionCap { entries: u128, cap: u64 },
    #[error("negative coefficient {coeff} at q^{exp}")]
    NegativeCoefficient { exp: i64, coeff: String },
    #[error("diagram contains {0} crossing(s); a crossingless graph is required")]
    HasCrossings(usize),
    #[error("rank mismatch: engine has m={engine}, diagram has m={diagram}")]
    RankMismatch { engine: u32, diagram: u32 },
}

/// A basis function `delta`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BasisState(pub Vec<u8>);

impl BasisState {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BasisState {
    /// Digit string; the empty state renders as `_`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }
        for &d in &self.0 {
            let c = char::from_digit(u32::from(d), 36).unwrap_or('?');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// All `m^n` basis states in lexicographic order.
pub fn basis_states(m: u32, n: usize) -> Vec<BasisState> {
    let total = (m as usize).pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0u8; n];
    for _ in 0..total {
        out.push(BasisState(cur.clone()));
        for j in (0..n).rev() {
            if u32::from(cur[j]) + 1 < m {
                cur[j] += 1;
                break;
            }
            cur[j] = 0;
        }
    }
    out
}

/// Finitely supported map from basis states to Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    seq: StrandSeq,
    terms: BTreeMap<BasisState, LaurentPoly>,
}

impl StateVector {
    pub fn zero(seq: StrandSeq) -> Self {
        Self {
            seq,
            terms: BTreeMap::new(),
        }
    }

    /// The scalar `p` on the empty sequence.
    pub fn scalar(m: u32, p: LaurentPoly) -> Result<Self, EngineError> {
        let mut v = Self::zero(StrandSeq::empty(m)?);
        v.add_term(BasisState::default(), p);
        Ok(v)
    }

    /// A single basis vector.
    pub fn basis(seq: StrandSeq, state: BasisState) -> Result<Self, EngineError> {
        if state.len() != seq.len() || state.0.iter().any(|&d| u32::from(d) >= seq.m()) {
            return Err(EngineError::InvalidState {
                state: state.to_string(),
                m: seq.m(),
                len: seq.len(),
            });
        }
        let mut v = Self::zero(seq);
        v.add_term(state, LaurentPoly::one());
        Ok(v)
    }

    pub fn seq(&self) -> &StrandSeq {
        &self.seq
    }

    pub fn terms(&self) -> &BTreeMap<BasisState, LaurentPoly> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<BasisState, LaurentPoly> {
        self.terms
    }

    pub fn get(&self, state: &BasisState) -> LaurentPoly {
        self.terms.get(state).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the unique state on the empty sequence.
    pub fn scalar_value(&self) -> LaurentPoly {
        self.get(&BasisState::default())
    }

    pub fn add_term(&mut self, state: BasisState, coeff: LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(state) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.seq.clone());
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c * p);
        }
        out
    }

    /// `self + other`; both must live on the same sequence.
    pub fn add(&self, other: &StateVector) -> Self {
        assert_eq!(self.seq, other.seq, "adding vectors on different sequences");
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }
}

/// Engine configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineOptions {
    /// Negates every cap. Only useful as a negative control for the
    /// relation battery.
    pub flip_cap_sign: bool,
}

#[derive(Clone, Debug)]
struct Tables {
    fund_u: LocalOp,
    fund_t: [LocalOp; 2],
    /// Unlike crossings on `(m-1, 1)`.
    unlike_dual_fund: [LocalOp; 2],
    /// Unlike crossings on `(1, m-1)`.
    unlike_fund_dual: [LocalOp; 2],
    dual_t: [LocalOp; 2],
    dual_u: LocalOp,
}

fn type_index(kind: CrossingType) -> usize {
    match kind {
        CrossingType::One => 0,
        CrossingType::Two => 1,
    }
}

/// Which two-slot table a dumbbell or crossing uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalKind {
    Dumbbell(Label),
    Cross(Label, Label, CrossingType),
}

/// The operator engine for one rank `m`.
#[derive(Clone, Debug)]
pub struct Engine {
    m: u32,
    options: EngineOptions,
    tables: Tables,
}

impl Engine {
    pub fn new(m: u32) -> Result<Self, EngineError> {
        Self::with_options(m, EngineOptions::default())
    }

    pub fn with_options(m: u32, options: EngineOptions) -> Result<Self, EngineError> {
        if m < 2 {
            return Err(DiagramError::InvalidRank(m).into());
        }
        let fund_u = tables::dumbbell_fund(m);
        let fund_t = [
            tables::crossing_from_dumbbell(&fund_u, CrossingType::One),
            tables::crossing_from_dumbbell(&fund_u, CrossingType::Two),
        ];
        let mut engine = Engine {
            m,
            options,
            tables: Tables {
                fund_u: fund_u.clone(),
                fund_t: fund_t.clone(),
                unlike_dual_fund: fund_t.clone(),
                unlike_fund_dual: fund_t.clone(),
                dual_t: fund_t,
                dual_u: fund_u,
            },
        };
        engine.derive_unlike()?;
        engine.derive_dual()?;
        Ok(engine)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    /// Reads a local table as a function of the source pair.
    pub fn local_image(&self, kind: LocalKind, a: u8, b: u8) -> &tables::LocalImage {
        self.local_table(kind).image(a, b)
    }

    fn local_table(&self, kind: LocalKind) -> &LocalOp {
        let t = &self.tables;
        match kind {
            LocalKind::Dumbbell(Label::Fund) => &t.fund_u,
            LocalKind::Dumbbell(Label::Dual) => &t.dual_u,
            LocalKind::Cross(Label::Fund, Label::Fund, k) => &t.fund_t[type_index(k)],
            LocalKind::Cross(Label::Dual, Label::Dual, k) => &t.dual_t[type_index(k)],
            LocalKind::Cross(Label::Dual, Label::Fund, k) => &t.unlike_dual_fund[type_index(k)],
            LocalKind::Cross(Label::Fund, Label::Dual, k) => &t.unlike_fund_dual[type_index(k)],
        }
    }

    /// Runs `gens` on every basis state of the two-strand sequence `seq`
    /// and reads off the resulting local table.
    fn table_from_composite(&self, seq: &StrandSeq, gens: &[Generator]) -> Result<LocalOp, EngineError> {
        let m = self.m;
        let mut images = Vec::new();
        for a in 0..m as u8 {
            for b in 0..m as u8 {
                let v = StateVector::basis(seq.clone(), BasisState(vec![a, b]))?;
                let out = self.apply_gens(&v, gens)?;
                images.push(
                    out.into_terms()
                        .into_iter()
                        .map(|(s, c)| ((s.0[0], s.0[1]), c))
                        .collect::<Vec<_>>(),
                );
            }
        }
        let mut it = images.into_iter();
        Ok(LocalOp::from_fn(m, |_, _| it.next().unwrap()))
    }

    fn derive_unlike(&mut self) -> Result<(), EngineError> {
        let m = self.m;
        let df = StrandSeq::new(m, vec![Label::Dual, Label::Fund])?;
        let fd = StrandSeq::new(m, vec![Label::Fund, Label::Dual])?;
        let mut dual_fund = Vec::new();
        let mut fund_dual = Vec::new();
        for kind in [CrossingType::One, CrossingType::Two] {
            dual_fund.push(self.table_from_composite(&df, &unlike_composite(&df, 1, kind)?)?);
            fund_dual.push(self.table_from_composite(&fd, &unlike_composite(&fd, 1, kind)?)?);
        }
        self.tables.unlike_dual_fund = [dual_fund[0].clone(), dual_fund[1].clone()];
        self.tables.unlike_fund_dual = [fund_dual[0].clone(), fund_dual[1].clone()];
        Ok(())
    }

    fn derive_dual(&mut self) -> Result<(), EngineError> {
        let dd = StrandSeq::new(self.m, vec![Label::Dual, Label::Dual])?;
        let one = self.table_from_composite(&dd, &dual_like_composite(1, CrossingType::One))?;
        let two = self.table_from_composite(&dd, &dual_like_composite(1, CrossingType::Two))?;
        self.tables.dual_u = tables::dumbbell_from_crossing(&two);
        self.tables.dual_t = [one, two];
        Ok(())
    }

    fn check_rank(&self, m: u32) -> Result<(), EngineError> {
        if m != self.m {
            return Err(EngineError::RankMismatch {
                engine: self.m,
                diagram: m,
            });
        }
        Ok(())
    }

    pub fn apply_cap(&self, v: &StateVector, slot: usize, order: CapOrder) -> Result<StateVector, EngineError> {
        self.check_rank(v.seq.m())?;
        let seq = v.seq.insert_pair(slot, order.labels())?;
        let m = self.m;
        let mut sign: i64 = if (slot as u64 - 1) * u64::from(m - 1) % 2 == 0 { 1 } else { -1 };
        if self.options.flip_cap_sign {
            sign = -sign;
        }
        let pair_terms: Vec<((u8, u8), LaurentPoly)> = (0..m)
            .map(|k| {
                let s = if k % 2 == 0 { sign } else { -sign };
                (((m - 1 - k) as u8, k as u8), LaurentPoly::monomial(s, i64::from(k)))
            })
            .collect();
        let mut out = StateVector::zero(seq);
        for (state, c) in &v.terms {
            for ((x, y), w) in &pair_terms {
                let mut d = Vec::with_capacity(state.len() + 2);
                d.extend_from_slice(&state.0[..slot - 1]);
                d.push(*x);
                d.push(*y);
                d.extend_from_slice(&state.0[slot - 1..]);
                out.add_term(BasisState(d), c * w);
            }
        }
        Ok(out)
    }

    pub fn apply_cup(&self, v: &StateVector, slot: usize) -> Result<StateVector, EngineError> {
        self.check_rank(v.seq.m())?;
        let seq = v.seq.drop_pair(slot)?;
        let m = self.m;
        let base_sign: i64 = if slot as u64 * u64::from(m - 1) % 2 == 0 { 1 } else { -1 };
        let mut out = StateVector::zero(seq);
        for (state, c) in &v.terms {
            let (a, b) = (state.0[slot - 1], state.0[slot]);
            if u32::from(a) + u32::from(b) != m - 1 {
                continue;
            }
            let s = if a % 2 == 0 { base_sign } else { -base_sign };
            let w = LaurentPoly::monomial(s, -i64::from(a));
            let mut d = state.0.clone();
            d.drain(slot - 1..=slot);
            out.add_term(BasisState(d), c * &w);
        }
        Ok(out)
    }

    fn apply_local(&self, v: &StateVector, slot: usize, table: &LocalOp, seq: StrandSeq) -> StateVector {
        let mut out = StateVector::zero(seq);
        for (state, c) in &v.terms {
            let (a, b) = (state.0[slot - 1], state.0[slot]);
            for ((x, y), w) in table.image(a, b) {
                let mut d = state.0.clone();
                d[slot - 1] = *x;
                d[slot] = *y;
                out.add_term(BasisState(d), c * w);
            }
        }
        out
    }

    pub fn apply_dumbbell(&self, v: &StateVector, slot: usize) -> Result<StateVector, EngineError> {
        self.check_rank(v.seq.m())?;
        let seq = Generator::Dumbbell { slot }.target(&v.seq)?;
        let label = seq.label(slot).expect("validated slot");
        Ok(self.apply_local(v, slot, self.local_table(LocalKind::Dumbbell(label)), seq))
    }

    fn apply_cross(&self, v: &StateVector, slot: usize, kind: CrossingType) -> Result<StateVector, EngineError> {
        self.check_rank(v.seq.m())?;
        let seq = v.seq.switch(slot)?;
        let a = v.seq.label(slot).expect("validated slot");
        let b = v.seq.label(slot + 1).expect("validated slot");
        Ok(self.apply_local(v, slot, self.local_table(LocalKind::Cross(a, b, kind)), seq))
    }

    /// Crossing of two strands with equal labels.
    pub fn apply_cross_like(&self, v: &StateVector, slot: usize, kind: CrossingType) -> Result<StateVector, EngineError> {
        if crate::diagram::is_unlike(&v.seq, slot) {
            return Err(EngineError::WrongCrossingKind {
                slot,
                found: "unlike",
            });
        }
        self.apply_cross(v, slot, kind)
    }

    /// Crossing of a `1` strand with an `m-1` strand, in either order.
    pub fn apply_cross_unlike(&self, v: &StateVector, slot: usize, kind: CrossingType) -> Result<StateVector, EngineError> {
        v.seq.switch(slot)?;
        if !crate::diagram::is_unlike(&v.seq, slot) {
            return Err(EngineError::WrongCrossingKind {
                slot,
                found: "like",
            });
        }
        self.apply_cross(v, slot, kind)
    }

    pub fn apply(&self, v: &StateVector, g: &Generator) -> Result<StateVector, EngineError> {
        match *g {
            Generator::Cap { slot, order } => self.apply_cap(v, slot, order),
            Generator::Cup { slot } => self.apply_cup(v, slot),
            Generator::Cross { slot, kind } => self.apply_cross(v, slot, kind),
            Generator::Dumbbell { slot } => self.apply_dumbbell(v, slot),
        }
    }

    pub fn apply_gens(&self, v: &StateVector, gens: &[Generator]) -> Result<StateVector, EngineError> {
        let mut cur = v.clone();
        for (index, g) in gens.iter().enumerate() {
            cur = self.apply(&cur, g).map_err(|e| match e {
                EngineError::Diagram(d) => EngineError::Diagram(DiagramError::AtGenerator {
                    index,
                    generator: *g,
                    source: Box::new(d),
                }),
                other => other,
            })?;
        }
        Ok(cur)
    }

    /// Applies a word to a vector living on its bottom sequence.
    pub fn apply_word(&self, v: &StateVector, word: &TangleWord) -> Result<StateVector, EngineError> {
        if v.seq != *word.bottom() {
            return Err(EngineError::SequenceMismatch {
                expected: word.bottom().to_string(),
                found: v.seq.to_string(),
            });
        }
        self.apply_gens(v, word.gens())
    }

    /// Value of a closed word: the image of the scalar 1.
    pub fn evaluate_closed(&self, word: &TangleWord) -> Result<LaurentPoly, EngineError> {
        self.check_rank(word.m())?;
        if !word.is_closed() {
            return Err(DiagramError::NotClosed {
                bottom: word.bottom().len(),
                top: word.top().len(),
            }
            .into());
        }
        let v = StateVector::scalar(self.m, LaurentPoly::one())?;
        Ok(self.apply_word(&v, word)?.scalar_value())
    }

    /// Coefficients of the value of a closed crossingless graph, which must
    /// all be non-negative.
    pub fn poincare_table(&self, word: &TangleWord) -> Result<BTreeMap<i64, u64>, EngineError> {
        let c = word.crossing_count();
        if c > 0 {
            return Err(EngineError::HasCrossings(c));
        }
        let value = self.evaluate_closed(word)?;
        let mut out = BTreeMap::new();
        for (e, coeff) in value.terms() {
            if coeff.is_negative() {
                return Err(EngineError::NegativeCoefficient {
                    exp: e,
                    coeff: coeff.to_string(),
                });
            }
            let n = coeff.to_u64().ok_or_else(|| EngineError::NegativeCoefficient {
                exp: e,
                coeff: coeff.to_string(),
            })?;
            out.insert(e, n);
        }
        Ok(out)
    }

    /// Matrix of `gens` acting from `bottom`, with at most `cap` entries
    /// (`rows * cols`).
    pub fn operator_matrix(&self, bottom: &StrandSeq, gens: &[Generator], cap: u64) -> Result<OperatorMatrix, EngineError> {
        self.check_rank(bottom.m())?;
        let top = crate::diagram::validate(bottom, gens)?;
        let m = u128::from(self.m);
        let entries = m.pow(bottom.len() as u32) * m.pow(top.len() as u32);
        if entries > u128::from(cap) {
            return Err(EngineError::DimensionCap { entries, cap });
        }
        let mut mat = OperatorMatrix::zero(bottom.clone(), top);
        for col in basis_states(self.m, bottom.len()) {
            let v = StateVector::basis(bottom.clone(), col.clone())?;
            let image = self.apply_gens(&v, gens)?;
            for (row, c) in image.into_terms() {
                mat.insert(row, col.clone(), c);
            }
        }
        Ok(mat)
    }

    /// [`Engine::operator_matrix`] with the default cap.
    pub fn matrix(&self, bottom: &StrandSeq, gens: &[Generator]) -> Result<OperatorMatrix, EngineError> {
        self.operator_matrix(bottom, gens, DEFAULT_MATRIX_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::braid_closure;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn st(d: &[u8]) -> BasisState {
        BasisState(d.to_vec())
    }

    #[test]
    fn basis_enumeration() {
        for m in 2..=5u32 {
            for n in 0..=4usize {
                let b = basis_states(m, n);
                assert_eq!(b.len(), (m as usize).pow(n as u32));
                assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(basis_states(3, 0), vec![BasisState::default()]);
    }

    #[test]
    fn cap_examples() {
        let e = Engine::new(2).unwrap();
        let one = StateVector::scalar(2, LaurentPoly::one()).unwrap();
        let v = e.apply_cap(&one, 1, CapOrder::FundDual).unwrap();
        assert_eq!(v.get(&st(&[1, 0])), p("1"));
        assert_eq!(v.get(&st(&[0, 1])), p("-q"));
        assert_eq!(v.terms().len(), 2);

        let e = Engine::new(3).unwrap();
        let one = StateVector::scalar(3, LaurentPoly::one()).unwrap();
        let v = e.apply_cap(&one, 1, CapOrder::FundDual).unwrap();
        assert_eq!(v.get(&st(&[2, 0])), p("1"));
        assert_eq!(v.get(&st(&[1, 1])), p("-q"));
        assert_eq!(v.get(&st(&[0, 2])), p("q^2"));

        // Slot 2 inside a one-strand vector: outer entry untouched, sign (-1)^(m-1).
        let seq = StrandSeq::from_values(3, &[1]).unwrap();
        let v = StateVector::basis(seq, st(&[2])).unwrap();
        let w = e.apply_cap(&v, 2, CapOrder::DualFund).unwrap();
        assert_eq!(w.get(&st(&[2, 2, 0])), p("1"));
        assert_eq!(w.get(&st(&[2, 1, 1])), p("-q"));
        let e4 = Engine::new(4).unwrap();
        let seq = StrandSeq::from_values(4, &[1]).unwrap();
        let v = StateVector::basis(seq, st(&[0])).unwrap();
        let w = e4.apply_cap(&v, 2, CapOrder::FundDual).unwrap();
        assert_eq!(w.get(&st(&[0, 3, 0])), p("-1"));
    }

    #[test]
    fn cup_examples() {
        let e = Engine::new(2).unwrap();
        let seq = StrandSeq::new(2, vec![Label::Fund, Label::Dual]).unwrap();
        let v = StateVector::basis(seq.clone(), st(&[1, 0])).unwrap();
        assert_eq!(e.apply_cup(&v, 1).unwrap().scalar_value(), p("q^-1"));
        let v = StateVector::basis(seq, st(&[1, 1])).unwrap();
        assert!(e.apply_cup(&v, 1).unwrap().is_zero());
    }

    #[test]
    fn unknot_is_quantum_integer() {
        for m in 2..=6 {
            let e = Engine::new(m).unwrap();
            for order in [CapOrder::FundDual, CapOrder::DualFund] {
                let w = TangleWord::closed(m, vec![Generator::Cap { slot: 1, order }, Generator::Cup { slot: 1 }]).unwrap();
                assert_eq!(e.evaluate_closed(&w).unwrap(), LaurentPoly::quantum_int(m));
            }
        }
    }

    #[test]
    fn dumbbell_and_crossing_m2() {
        let e = Engine::new(2).unwrap();
        let seq = StrandSeq::from_values(2, &[1, 1]).unwrap();
        let u = |d: &[u8]| e.apply_dumbbell(&StateVector::basis(seq.clone(), st(d)).unwrap(), 1).unwrap();
        let v = u(&[0, 1]);
        assert_eq!(v.get(&st(&[0, 1])), p("q"));
        assert_eq!(v.get(&st(&[1, 0])), p("-1"));
        assert!(u(&[1, 1]).is_zero());

        let t = |d: &[u8]| {
            e.apply_cross_like(&StateVector::basis(seq.clone(), st(d)).unwrap(), 1, CrossingType::Two)
                .unwrap()
        };
        let v = t(&[0, 0]);
        assert_eq!(v.terms().len(), 1);
        assert_eq!(v.get(&st(&[0, 0])), p("q^-1"));
        let v = t(&[0, 1]);
        assert_eq!(v.terms().len(), 1);
        assert_eq!(v.get(&st(&[1, 0])), p("q^-2"));
        let v = t(&[1, 0]);
        assert_eq!(v.get(&st(&[0, 1])), p("q^-2"));
        assert_eq!(v.get(&st(&[1, 0])), p("q^-1 - q^-3"));
    }

    #[test]
    fn wrong_crossing_kind_is_rejected() {
        let e = Engine::new(3).unwrap();
        let seq = StrandSeq::from_values(3, &[1, 2]).unwrap();
        let v = StateVector::basis(seq, st(&[0, 0])).unwrap();
        assert!(matches!(
            e.apply_cross_like(&v, 1, CrossingType::One),
            Err(EngineError::WrongCrossingKind { .. })
        ));
        assert!(e.apply_cross_unlike(&v, 1, CrossingType::One).is_ok());
        let seq = StrandSeq::from_values(3, &[1, 1]).unwrap();
        let v = StateVector::basis(seq, st(&[0, 0])).unwrap();
        assert!(matches!(
            e.apply_cross_unlike(&v, 1, CrossingType::One),
            Err(EngineError::WrongCrossingKind { .. })
        ));
    }

    #[test]
    fn closed_values() {
        let e = Engine::new(2).unwrap();
        let hopf = braid_closure(2, &[1, 1], 2).unwrap();
        assert_eq!(e.evaluate_closed(&hopf).unwrap(), p("q^6 + q^4 + q^2 + 1"));
        let trefoil = braid_closure(2, &[1, 1, 1], 2).unwrap();
        assert_eq!(e.evaluate_closed(&trefoil).unwrap(), p("-q^9 + q^5 + q^3 + q"));
        let e3 = Engine::new(3).unwrap();
        let fig8 = braid_closure(3, &[1, -2, 1, -2], 3).unwrap();
        assert_eq!(
            e3.evaluate_closed(&fig8).unwrap(),
            p("q^8 + q^6 - 1 + q^-6 + q^-8")
        );
    }

    #[test]
    fn evaluate_rejects_open_words() {
        let e = Engine::new(2).unwrap();
        let w = TangleWord::closed(2, vec![Generator::Cap { slot: 1, order: CapOrder::FundDual }]).unwrap();
        assert!(matches!(
            e.evaluate_closed(&w),
            Err(EngineError::Diagram(DiagramError::NotClosed { .. }))
        ));
        let w3 = braid_closure(1, &[], 3).unwrap();
        assert!(matches!(e.evaluate_closed(&w3), Err(EngineError::RankMismatch { .. })));
    }

    #[test]
    fn poincare_examples() {
        let e = Engine::new(3).unwrap();
        let circle = braid_closure(1, &[], 3).unwrap();
        let t = e.poincare_table(&circle).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(-2, 1), (0, 1), (2, 1)]);
        let e = Engine::new(2).unwrap();
        let two = braid_closure(2, &[], 2).unwrap();
        let t = e.poincare_table(&two).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(-2, 1), (0, 2), (2, 1)]);
        let hopf = braid_closure(2, &[1, 1], 2).unwrap();
        assert!(matches!(e.poincare_table(&hopf), Err(EngineError::HasCrossings(2))));
    }

    #[test]
    fn flipped_cap_negates_unknot() {
        let e = Engine::with_options(3, EngineOptions { flip_cap_sign: true }).unwrap();
        let w = braid_closure(1, &[], 3).unwrap();
        assert_eq!(e.evaluate_closed(&w).unwrap(), -LaurentPoly::quantum_int(3));
    }

    #[test]
    fn big_dumbbell_m3() {
        let e = Engine::new(3).unwrap();
        let img = |a, b| e.local_image(LocalKind::Dumbbell(Label::Dual), a, b).clone();
        assert_eq!(img(1, 1), vec![((0, 2), p("q^2 - 1")), ((2, 0), p("q^-2 - 1"))]);
        assert_eq!(img(0, 2), vec![((0, 2), p("q")), ((2, 0), p("-q^-1"))]);
    }

    #[test]
    fn unlike_inner_type_is_forced() {
        // Pitchfork: a cap at slot 2 followed by a type l crossing at slot 1
        // equals a cap at slot 1 followed by the inverse type at slot 2, where
        // the latter crossing is unlike. Expanding it with an inner crossing
        // of the inverse type is the only choice that satisfies this.
        use CrossingType::*;
        let m = 3;
        let e = Engine::new(m).unwrap();
        let f = StrandSeq::from_values(m, &[1]).unwrap();
        let lr = CapOrder::FundDual;
        for l in [One, Two] {
            let lhs = e
                .matrix(&f, &[Generator::Cap { slot: 2, order: lr }, Generator::Cross { slot: 1, kind: l }])
                .unwrap();
            let rhs = |inner: CrossingType| {
                e.matrix(
                    &f,
                    &[
                        Generator::Cap { slot: 1, order: lr },
                        Generator::Cap { slot: 4, order: lr },
                        Generator::Cross { slot: 3, kind: inner },
                        Generator::Cup { slot: 2 },
                    ],
                )
                .unwrap()
            };
            // The outer unlike crossing has type l.inverse(); its inner one l.
            assert_eq!(lhs, rhs(l), "type {l:?}");
            assert_ne!(lhs, rhs(l.inverse()), "type {l:?}");
            let direct = e
                .matrix(&f, &[Generator::Cap { slot: 1, order: lr }, Generator::Cross { slot: 2, kind: l.inverse() }])
                .unwrap();
            assert_eq!(lhs, direct);
        }
    }
}
