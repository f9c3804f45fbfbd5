//! Dense integer model of the tangle maps at `q = 1`.
//!
//! Strands labelled `1` carry `C^m` with basis `e_0..e_{m-1}`; strands
//! labelled `m-1` carry `Λ^{m-1} C^m`, where `v_k` is the sorted wedge of all
//! `e_j` except `e_{m-1-k}`. A basis vector of the tensor product is indexed
//! by its digit string `δ`, matching [`BasisState`].
//!
//! Nothing here touches the sparse engine; [`compare_at_q1`] is the bridge.

use num_bigint::BigInt;
use thiserror::Error;

use crate::diagram::{dual_like_composite, unlike_composite, CapOrder, CrossingType, DiagramError, Generator, Label, StrandSeq, TangleWord};
use crate::ktheory::{basis_states, BasisState, Engine, EngineError, StateVector};

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("input {input}: coefficient of {output} is {engine} in the engine but {classical} classically")]
    Mismatch {
        input: BasisState,
        output: BasisState,
        engine: BigInt,
        classical: i64,
    },
    #[error("{generator} does not annihilate the {what} (first nonzero entry at {state})")]
    NotInvariant {
        generator: String,
        what: &'static str,
        state: BasisState,
    },
}

/// A vector in `V_{δ(1)} ⊗ ... ⊗ V_{δ(n)}` with dense integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalVector {
    seq: StrandSeq,
    coeffs: Vec<i64>,
}

fn dim(m: u32, n: usize) -> usize {
    (m as usize).pow(n as u32)
}

fn digits(m: u32, n: usize, mut idx: usize) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for d in out.iter_mut().rev() {
        *d = (idx % m as usize) as u8;
        idx /= m as usize;
    }
    out
}

fn index(m: u32, ds: &[u8]) -> usize {
    ds.iter().fold(0, |acc, &d| acc * m as usize + d as usize)
}

fn sign(e: u64) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

impl ClassicalVector {
    pub fn zero(seq: StrandSeq) -> Self {
        let coeffs = vec![0; dim(seq.m(), seq.len())];
        Self { seq, coeffs }
    }

    pub fn basis(seq: StrandSeq, state: &BasisState) -> Self {
        let mut v = Self::zero(seq);
        let i = index(v.seq.m(), &state.0);
        v.coeffs[i] = 1;
        v
    }

    pub fn seq(&self) -> &StrandSeq {
        &self.seq
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn get(&self, state: &BasisState) -> i64 {
        self.coeffs[index(self.seq.m(), &state.0)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn entries(&self) -> impl Iterator<Item = (Vec<u8>, i64)> + '_ {
        let (m, n) = (self.seq.m(), self.seq.len());
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (digits(m, n, i), c))
    }

    fn add_at(&mut self, ds: &[u8], c: i64) {
        let i = index(self.seq.m(), ds);
        self.coeffs[i] += c;
    }
}

/// Cap at `slot`: inserts `Σ_k (-1)^{(i-1)(m-1)} (-1)^k v_{m-1-k} ⊗ v_k`.
pub fn classical_cap(v: &ClassicalVector, slot: usize, order: CapOrder) -> Result<ClassicalVector, ClassicalError> {
    let m = v.seq.m();
    let seq = v.seq.insert_pair(slot, order.labels())?;
    let base = sign((slot as u64 - 1) * u64::from(m - 1));
    let mut out = ClassicalVector::zero(seq);
    for (ds, c) in v.entries() {
        for k in 0..m as u8 {
            let mut t = ds.clone();
            t.splice(slot - 1..slot - 1, [m as u8 - 1 - k, k]);
            out.add_at(&t, c * base * sign(u64::from(k)));
        }
    }
    Ok(out)
}

/// Cup at `slot`: `v_a ⊗ v_b ↦ (-1)^{i(m-1)} (-1)^a` when `a + b = m - 1`.
pub fn classical_cup(v: &ClassicalVector, slot: usize) -> Result<ClassicalVector, ClassicalError> {
    let m = v.seq.m();
    let seq = v.seq.drop_pair(slot)?;
    let base = sign(slot as u64 * u64::from(m - 1));
    let mut out = ClassicalVector::zero(seq);
    for (ds, c) in v.entries() {
        let (a, b) = (ds[slot - 1], ds[slot]);
        if u32::from(a) + u32::from(b) != m - 1 {
            continue;
        }
        let mut t = ds.clone();
        t.drain(slot - 1..=slot);
        out.add_at(&t, c * base * sign(u64::from(a)));
    }
    Ok(out)
}

/// Transposition of slots `i`, `i+1`.
pub fn classical_swap(v: &ClassicalVector, slot: usize) -> Result<ClassicalVector, ClassicalError> {
    let seq = v.seq.switch(slot)?;
    let mut out = ClassicalVector::zero(seq);
    for (mut ds, c) in v.entries() {
        ds.swap(slot - 1, slot);
        out.add_at(&ds, c);
    }
    Ok(out)
}

/// Crossing of either type. Two `1`-labelled strands are transposed; any
/// other crossing is the transposition composite obtained by turning a
/// strand around with a cap and a cup, exactly as the diagram rewrites it.
pub fn classical_cross(v: &ClassicalVector, slot: usize) -> Result<ClassicalVector, ClassicalError> {
    let (a, b) = match (v.seq.label(slot), v.seq.label(slot + 1)) {
        (Some(Label::Fund), Some(Label::Fund)) => return classical_swap(v, slot),
        (Some(a), Some(b)) => (a, b),
        _ => return Err(DiagramError::SlotOutOfRange { slot, len: v.seq.len() }.into()),
    };
    let m = v.seq.m();
    let local = composite_cross(m, a, b)?;
    let mut out = ClassicalVector::zero(v.seq.switch(slot)?);
    let mm = m as usize;
    for (ds, c) in v.entries() {
        let col = ds[slot - 1] as usize * mm + ds[slot] as usize;
        for row in 0..mm * mm {
            let x = local[row * mm * mm + col];
            if x != 0 {
                let mut t = ds.clone();
                t[slot - 1] = (row / mm) as u8;
                t[slot] = (row % mm) as u8;
                out.add_at(&t, c * x);
            }
        }
    }
    Ok(out)
}

/// The rotation composite for a crossing of labels `(a, b)`, as a dense
/// `m^2 x m^2` matrix (row-major, row = output pair). The cap and cup signs
/// of a composite multiply to `(-1)^(m-1)` at every slot, so evaluating it
/// at slot 1 of a two-strand sequence gives the local matrix everywhere.
fn composite_cross(m: u32, a: Label, b: Label) -> Result<std::rc::Rc<Vec<i64>>, ClassicalError> {
    thread_local! {
        static CACHE: std::cell::RefCell<std::collections::HashMap<(u32, Label, Label), std::rc::Rc<Vec<i64>>>> =
            Default::default();
    }
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&(m, a, b)).cloned()) {
        return Ok(hit);
    }
    let seq = StrandSeq::new(m, vec![a, b])?;
    let gens = if a == b {
        dual_like_composite(1, CrossingType::One).to_vec()
    } else {
        unlike_composite(&seq, 1, CrossingType::One)?.to_vec()
    };
    let mm = (m * m) as usize;
    let mut local = vec![0; mm * mm];
    for (col, state) in basis_states(m, 2).iter().enumerate() {
        let img = classical_apply_word(&ClassicalVector::basis(seq.clone(), state), &gens)?;
        for (row, &x) in img.coeffs.iter().enumerate() {
            local[row * mm + col] = x;
        }
    }
    let local = std::rc::Rc::new(local);
    CACHE.with(|c| c.borrow_mut().insert((m, a, b), local.clone()));
    Ok(local)
}

/// Dumbbell: `id - cross` on two equal labels.
pub fn classical_dumbbell(v: &ClassicalVector, slot: usize) -> Result<ClassicalVector, ClassicalError> {
    let g = Generator::Dumbbell { slot };
    let seq = g.target(&v.seq)?;
    let swapped = classical_cross(v, slot)?;
    let mut out = ClassicalVector::zero(seq);
    for (i, (a, b)) in v.coeffs.iter().zip(&swapped.coeffs).enumerate() {
        out.coeffs[i] = a - b;
    }
    Ok(out)
}

pub fn classical_apply(v: &ClassicalVector, g: &Generator) -> Result<ClassicalVector, ClassicalError> {
    match *g {
        Generator::Cap { slot, order } => classical_cap(v, slot, order),
        Generator::Cup { slot } => classical_cup(v, slot),
        Generator::Cross { slot, .. } => classical_cross(v, slot),
        Generator::Dumbbell { slot } => classical_dumbbell(v, slot),
    }
}

pub fn classical_apply_word(v: &ClassicalVector, gens: &[Generator]) -> Result<ClassicalVector, ClassicalError> {
    gens.iter().try_fold(v.clone(), |acc, g| classical_apply(&acc, g))
}

/// Runs `word` on every basis vector through the engine (specialized to
/// `q = 1`) and through the dense model, and reports the first difference.
pub fn compare_at_q1(engine: &Engine, word: &TangleWord) -> Result<(), ClassicalError> {
    let bottom = word.bottom();
    let top = word.top();
    for state in basis_states(bottom.m(), bottom.len()) {
        let ev = engine.apply_word(&StateVector::basis(bottom.clone(), state.clone())?, word)?;
        let cv = classical_apply_word(&ClassicalVector::basis(bottom.clone(), &state), word.gens())?;
        for out in basis_states(top.m(), top.len()) {
            let e = ev.get(&out).eval_q1();
            let c = cv.get(&out);
            if e != BigInt::from(c) {
                return Err(ClassicalError::Mismatch {
                    input: state,
                    output: out,
                    engine: e,
                    classical: c,
                });
            }
        }
    }
    Ok(())
}

/// A Chevalley generator of `sl_m`: `E_{r,r+1}` when `raising`, else
/// `E_{r+1,r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chevalley {
    pub r: u8,
    pub raising: bool,
}

impl Chevalley {
    pub fn all(m: u32) -> Vec<Chevalley> {
        (0..m as u8 - 1)
            .flat_map(|r| [Chevalley { r, raising: true }, Chevalley { r, raising: false }])
            .collect()
    }

    /// `(from, to)` on the standard basis `e_j`.
    fn endpoints(self) -> (u8, u8) {
        if self.raising {
            (self.r + 1, self.r)
        } else {
            (self.r, self.r + 1)
        }
    }
}

impl std::fmt::Display for Chevalley {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = if self.raising { 'e' } else { 'f' };
        write!(f, "{c}_{}", self.r + 1)
    }
}

/// The subset of `{0..m-1}` spanned by the wedge `v_k` of `Λ^{m-1}`.
pub fn wedge_subset(m: u32, k: u8) -> Vec<u8> {
    let missing = m as u8 - 1 - k;
    (0..m as u8).filter(|&j| j != missing).collect()
}

fn wedge_index(m: u32, subset: &[u8]) -> Option<u8> {
    if subset.len() != m as usize - 1 {
        return None;
    }
    let missing = (0..m as u8).find(|j| !subset.contains(j))?;
    Some(m as u8 - 1 - missing)
}

/// Action of `x` on `Λ^p C^m`, for the wedge of the sorted subset `s`:
/// the derivation replacing `e_from` by `e_to`. Returns the image subset and
/// the sign from re-sorting, or `None` when the result vanishes.
pub fn wedge_action(x: Chevalley, s: &[u8]) -> Option<(Vec<u8>, i64)> {
    let (from, to) = x.endpoints();
    let pos = s.iter().position(|&j| j == from)?;
    if s.contains(&to) {
        return None;
    }
    let mut t = s.to_vec();
    t[pos] = to;
    // Bubble the new entry into place, counting transpositions.
    let mut sgn = 1;
    let mut p = pos;
    while p > 0 && t[p - 1] > t[p] {
        t.swap(p - 1, p);
        sgn = -sgn;
        p -= 1;
    }
    while p + 1 < t.len() && t[p] > t[p + 1] {
        t.swap(p, p + 1);
        sgn = -sgn;
        p += 1;
    }
    Some((t, sgn))
}

/// Single-factor action of `x` on `v_d` for a strand with label `label`.
fn factor_action(m: u32, label: Label, x: Chevalley, d: u8) -> Option<(u8, i64)> {
    match label {
        // At m = 2 both labels have value 1 and carry C^2.
        _ if m == 2 || label == Label::Fund => {
            let (from, to) = x.endpoints();
            (d == from).then_some((to, 1))
        }
        _ => {
            let (t, s) = wedge_action(x, &wedge_subset(m, d))?;
            Some((wedge_index(m, &t).expect("degree preserved"), s))
        }
    }
}

/// Action of a Chevalley generator on the whole tensor product.
pub fn chevalley_apply(v: &ClassicalVector, x: Chevalley) -> ClassicalVector {
    let m = v.seq.m();
    let mut out = ClassicalVector::zero(v.seq.clone());
    for (ds, c) in v.entries() {
        for (pos, label) in v.seq.labels().iter().enumerate() {
            if let Some((d, s)) = factor_action(m, *label, x, ds[pos]) {
                let mut t = ds.clone();
                t[pos] = d;
                out.add_at(&t, c * s);
            }
        }
    }
    out
}

fn first_nonzero(v: &ClassicalVector) -> Option<BasisState> {
    v.entries().next().map(|(ds, _)| BasisState(ds))
}

/// Checks that `v` is annihilated by every Chevalley generator.
pub fn check_invariant(v: &ClassicalVector, what: &'static str) -> Result<(), ClassicalError> {
    for x in Chevalley::all(v.seq.m()) {
        if let Some(state) = first_nonzero(&chevalley_apply(v, x)) {
            return Err(ClassicalError::NotInvariant {
                generator: x.to_string(),
                what,
                state,
            });
        }
    }
    Ok(())
}

/// Verifies that the cap at `slot` produces invariant vectors (both label
/// orders) and that the cup at `slot` kills the image of every generator.
pub fn check_equivariance(m: u32, slot: usize) -> Result<(), ClassicalError> {
    let prefix = StrandSeq::new(m, vec![Label::Fund; slot - 1])?;
    for order in [CapOrder::FundDual, CapOrder::DualFund] {
        let one = ClassicalVector::basis(StrandSeq::empty(m)?, &BasisState(Vec::new()));
        let cap = classical_cap(&one, 1, order)?;
        check_invariant(&cap, "cap vector")?;
        // The cup at `slot` on (prefix, pair): its kernel must be a
        // subrepresentation, i.e. cup(x.w) = x.cup(w) for every basis w.
        let (a, b) = order.labels();
        let mut labels = prefix.labels().to_vec();
        labels.extend([a, b]);
        let seq = StrandSeq::new(m, labels)?;
        for state in basis_states(m, seq.len()) {
            let w = ClassicalVector::basis(seq.clone(), &state);
            let down = classical_cup(&w, slot)?;
            for x in Chevalley::all(m) {
                let lhs = classical_cup(&chevalley_apply(&w, x), slot)?;
                let rhs = chevalley_apply(&down, x);
                if lhs != rhs {
                    return Err(ClassicalError::NotInvariant {
                        generator: x.to_string(),
                        what: "cup pairing",
                        state,
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty(m: u32) -> ClassicalVector {
        ClassicalVector::basis(StrandSeq::empty(m).unwrap(), &BasisState(Vec::new()))
    }

    #[test]
    fn cap_m2() {
        let v = classical_cap(&empty(2), 1, CapOrder::FundDual).unwrap();
        assert_eq!(v.coeffs(), &[0, -1, 1, 0]);
    }

    #[test]
    fn cup_after_cap_is_m() {
        for m in 2..=5 {
            for order in [CapOrder::FundDual, CapOrder::DualFund] {
                let v = classical_cap(&empty(m), 1, order).unwrap();
                let s = classical_cup(&v, 1).unwrap();
                assert_eq!(s.coeffs(), &[i64::from(m)]);
            }
        }
    }

    #[test]
    fn transpositions_satisfy_symmetric_group_relations() {
        let seq = StrandSeq::from_values(3, &[1, 1, 1]).unwrap();
        for state in basis_states(3, 3) {
            let v = ClassicalVector::basis(seq.clone(), &state);
            let twice = classical_cross(&classical_cross(&v, 1).unwrap(), 1).unwrap();
            assert_eq!(twice, v);
            let l = classical_apply_word(&v, &[Generator::Cross { slot: 1, kind: CrossingType::One }, Generator::Cross { slot: 2, kind: CrossingType::One }, Generator::Cross { slot: 1, kind: CrossingType::One }]).unwrap();
            let r = classical_apply_word(&v, &[Generator::Cross { slot: 2, kind: CrossingType::One }, Generator::Cross { slot: 1, kind: CrossingType::One }, Generator::Cross { slot: 2, kind: CrossingType::One }]).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn local_composite_matches_full_composite() {
        // Evaluating the rotation at a later slot, with bystander strands,
        // agrees with the cached two-strand matrix.
        for m in 2..=4u32 {
            for labels in [[Label::Fund, Label::Dual], [Label::Dual, Label::Fund], [Label::Dual, Label::Dual]] {
                let mut all = vec![Label::Dual, Label::Fund];
                all.extend(labels);
                let seq = StrandSeq::new(m, all).unwrap();
                let gens = if labels[0] == labels[1] {
                    dual_like_composite(3, CrossingType::One).to_vec()
                } else {
                    unlike_composite(&seq, 3, CrossingType::One).unwrap().to_vec()
                };
                for state in basis_states(m, 4) {
                    let v = ClassicalVector::basis(seq.clone(), &state);
                    assert_eq!(classical_cross(&v, 3).unwrap(), classical_apply_word(&v, &gens).unwrap(), "m={m} {seq} {state}");
                }
            }
        }
    }

    #[test]
    fn composites_are_signed_transpositions() {
        // A single turn contributes (-1)^(m-1); two turns cancel.
        for m in 2..=5u32 {
            for labels in [[Label::Fund, Label::Dual], [Label::Dual, Label::Fund], [Label::Dual, Label::Dual]] {
                let want = if m % 2 == 0 && labels[0] != labels[1] { -1 } else { 1 };
                let seq = StrandSeq::new(m, labels.to_vec()).unwrap();
                for state in basis_states(m, 2) {
                    let v = ClassicalVector::basis(seq.clone(), &state);
                    let got = classical_cross(&v, 1).unwrap();
                    let mut swapped = classical_swap(&v, 1).unwrap();
                    swapped.coeffs.iter_mut().for_each(|c| *c *= want);
                    assert_eq!(got, swapped, "m={m} {seq} {state}");
                }
            }
        }
    }

    #[test]
    fn wedge_power_dimension_and_weights() {
        for m in 2..=6u32 {
            let subsets: Vec<_> = (0..m as u8).map(|k| wedge_subset(m, k)).collect();
            // m basis vectors, pairwise distinct, each of size m-1.
            assert_eq!(subsets.len(), m as usize);
            for (k, s) in subsets.iter().enumerate() {
                assert_eq!(s.len(), m as usize - 1);
                assert_eq!(wedge_index(m, s), Some(k as u8));
            }
            // Weights: v_k has weight -e_{m-1-k} (mod the trace), so each
            // weight space is one-dimensional and f_r sends v_k to ±v_{k-1}
            // or zero.
            for x in Chevalley::all(m) {
                let mut hits = 0;
                for s in &subsets {
                    if let Some((t, sg)) = wedge_action(x, s) {
                        assert_eq!(sg.abs(), 1);
                        assert!(subsets.contains(&t));
                        hits += 1;
                    }
                }
                assert_eq!(hits, 1, "m={m} {x}");
            }
        }
    }

    #[test]
    fn wedge_action_sign() {
        // e_{0,1} on e_1 ^ e_2 gives e_0 ^ e_2 with no sign; on e_2 ^ e_3
        // of a larger wedge f_{2} sends e_2 -> e_3 only when absent.
        assert_eq!(wedge_action(Chevalley { r: 0, raising: true }, &[1, 2]), Some((vec![0, 2], 1)));
        assert_eq!(wedge_action(Chevalley { r: 2, raising: false }, &[0, 2]), Some((vec![0, 3], 1)));
        assert_eq!(wedge_action(Chevalley { r: 0, raising: true }, &[0, 1]), None);
    }

    #[test]
    fn singlet_m2() {
        let v = classical_cap(&empty(2), 1, CapOrder::FundDual).unwrap();
        let e1 = chevalley_apply(&v, Chevalley { r: 0, raising: true });
        assert!(e1.is_zero());
    }

    #[test]
    fn equivariance_m2_to_5() {
        for m in 2..=5 {
            for slot in 1..=3 {
                check_equivariance(m, slot).unwrap();
            }
        }
    }

    #[test]
    fn perturbed_cap_is_not_invariant() {
        let mut v = classical_cap(&empty(3), 1, CapOrder::FundDual).unwrap();
        let i = v.coeffs.iter().position(|&c| c != 0).unwrap();
        v.coeffs[i] = -v.coeffs[i];
        assert!(matches!(check_invariant(&v, "cap vector"), Err(ClassicalError::NotInvariant { .. })));
    }

    #[test]
    fn unknot_and_identity_agree() {
        for m in 2..=5 {
            let e = Engine::new(m).unwrap();
            let w = TangleWord::closed(m, vec![Generator::Cap { slot: 1, order: CapOrder::FundDual }, Generator::Cup { slot: 1 }]).unwrap();
            compare_at_q1(&e, &w).unwrap();
            let id = TangleWord::identity(StrandSeq::from_values(m, &[1, m - 1, 1]).unwrap());
            compare_at_q1(&e, &id).unwrap();
        }
    }

    #[test]
    fn every_generator_agrees_at_q1() {
        for m in 2..=4 {
            let e = Engine::new(m).unwrap();
            for n in 0..=3 {
                for seq in crate::relations::all_sequences(m, n) {
                    for g in crate::relations::candidates(&seq) {
                        let w = TangleWord::new(seq.clone(), vec![g]).unwrap();
                        compare_at_q1(&e, &w).unwrap_or_else(|err| panic!("m={m} {seq} {g}: {err}"));
                    }
                }
            }
        }
    }
}
