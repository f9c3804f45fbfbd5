//! Combinatorial tangle and MOY-graph diagrams.
//!
//! A diagram is a [`TangleWord`]: a bottom [`StrandSeq`] and a stack of
//! elementary [`Generator`]s applied bottom to top. Slot indices are 1-based.

pub mod dsl;

use std::fmt;

use thiserror::Error;

use crate::laurent::LaurentPoly;

/// Strand label: the fundamental weight `1` or its dual `m-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Fund,
    Dual,
}

impl Label {
    pub fn value(self, m: u32) -> u32 {
        match self {
            Label::Fund => 1,
            Label::Dual => m - 1,
        }
    }

    /// The label of the same strand with its orientation reversed.
    pub fn reversed(self) -> Label {
        match self {
            Label::Fund => Label::Dual,
            Label::Dual => Label::Fund,
        }
    }

    /// Parses `1`, `m-1` or the numeric value of `m-1`. For `m = 2` the
    /// numeric form `1` denotes the first orientation; `m-1` the other.
    pub fn from_token(tok: &str, m: u32) -> Result<Label, DiagramError> {
        if tok == "m-1" {
            if m < 2 {
                return Err(DiagramError::InvalidRank(m));
            }
            return Ok(Label::Dual);
        }
        match tok.parse::<u32>() {
            Ok(v) => Label::from_value(v, m),
            Err(_) => Err(DiagramError::InvalidLabel { label: 0, m }),
        }
    }

    /// Inverse of [`Label::from_token`].
    pub fn token(self, m: u32) -> String {
        match (self, m) {
            (Label::Dual, 2) => "m-1".to_string(),
            _ => self.value(m).to_string(),
        }
    }

    pub fn from_value(v: u32, m: u32) -> Result<Label, DiagramError> {
        if m < 2 {
            return Err(DiagramError::InvalidRank(m));
        }
        if v == 1 {
            Ok(Label::Fund)
        } else if v == m - 1 {
            Ok(Label::Dual)
        } else {
            Err(DiagramError::InvalidLabel { label: v, m })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("rank m must be at least 2, got {0}")]
    InvalidRank(u32),
    #[error("label {label} is neither 1 nor m-1 (m={m})")]
    InvalidLabel { label: u32, m: u32 },
    #[error("slot {slot} out of range for a sequence of {len} strands")]
    SlotOutOfRange { slot: usize, len: usize },
    #[error("labels {left},{right} at slot {slot} do not sum to m={m}")]
    NotComplementary { slot: usize, left: u32, right: u32, m: u32 },
    #[error("labels {left},{right} at slot {slot} are not equal")]
    UnequalLabels { slot: usize, left: u32, right: u32 },
    #[error("generator #{index} `{generator}`: {source}")]
    AtGenerator {
        index: usize,
        generator: Generator,
        #[source]
        source: Box<DiagramError>,
    },
    #[error("rank mismatch: sequence has m={left}, other has m={right}")]
    RankMismatch { left: u32, right: u32 },
    #[error("braid closure needs at least one strand")]
    EmptyBraid,
    #[error("braid letter {letter} out of range for {strands} strands")]
    BraidLetter { letter: i64, strands: usize },
    #[error("generator #{index} is an unlike crossing; rewrite it with rewrite_unlike first")]
    UnlikeCrossing { index: usize },
    #[error("diagram is not closed (bottom has {bottom} strands, top has {top})")]
    NotClosed { bottom: usize, top: usize },
}

/// Boundary data of a diagram slice: the rank `m` and one label per strand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrandSeq {
    m: u32,
    labels: Vec<Label>,
}

impl StrandSeq {
    /// For `m = 2` both labels have value `1`; the [`Label`] still records
    /// the strand orientation.
    pub fn new(m: u32, labels: Vec<Label>) -> Result<Self, DiagramError> {
        if m < 2 {
            return Err(DiagramError::InvalidRank(m));
        }
        Ok(Self { m, labels })
    }

    pub fn empty(m: u32) -> Result<Self, DiagramError> {
        Self::new(m, Vec::new())
    }

    /// Sequence from numeric labels, each of which must be `1` or `m-1`.
    pub fn from_values(m: u32, values: &[u32]) -> Result<Self, DiagramError> {
        if m < 2 {
            return Err(DiagramError::InvalidRank(m));
        }
        let labels = values
            .iter()
            .map(|&v| Label::from_value(v, m))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(m, labels)
    }

    /// `(1, ..., 1, m-1, ..., m-1)` with `k` entries of each.
    pub fn braid_base(m: u32, k: usize) -> Result<Self, DiagramError> {
        let mut labels = vec![Label::Fund; k];
        labels.extend(std::iter::repeat(Label::Dual).take(k));
        Self::new(m, labels)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn values(&self) -> Vec<u32> {
        self.labels.iter().map(|l| l.value(self.m)).collect()
    }

    /// Label at 1-based `slot`.
    pub fn label(&self, slot: usize) -> Option<Label> {
        slot.checked_sub(1).and_then(|s| self.labels.get(s).copied())
    }

    fn pair(&self, slot: usize) -> Result<(Label, Label), DiagramError> {
        if slot == 0 || slot + 1 > self.len() {
            return Err(DiagramError::SlotOutOfRange {
                slot,
                len: self.len(),
            });
        }
        Ok((self.labels[slot - 1], self.labels[slot]))
    }

    /// True when the labels sum to `m` and the strands are oppositely
    /// oriented (the second condition only matters for `m = 2`).
    fn sums_to_m(&self, a: Label, b: Label) -> bool {
        a.value(self.m) + b.value(self.m) == self.m && a == b.reversed()
    }

    /// Transposes the entries at `slot`, `slot+1`.
    pub fn switch(&self, slot: usize) -> Result<Self, DiagramError> {
        self.pair(slot)?;
        let mut labels = self.labels.clone();
        labels.swap(slot - 1, slot);
        Ok(Self { m: self.m, labels })
    }

    /// Removes the entries at `slot`, `slot+1`, which must sum to `m`.
    pub fn drop_pair(&self, slot: usize) -> Result<Self, DiagramError> {
        let (a, b) = self.pair(slot)?;
        if !self.sums_to_m(a, b) {
            return Err(DiagramError::NotComplementary {
                slot,
                left: a.value(self.m),
                right: b.value(self.m),
                m: self.m,
            });
        }
        let mut labels = self.labels.clone();
        labels.drain(slot - 1..=slot);
        Ok(Self { m: self.m, labels })
    }

    /// Inserts `(a, b)` so that they occupy `slot`, `slot+1`.
    pub fn insert_pair(&self, slot: usize, (a, b): (Label, Label)) -> Result<Self, DiagramError> {
        if slot == 0 || slot > self.len() + 1 {
            return Err(DiagramError::SlotOutOfRange {
                slot,
                len: self.len(),
            });
        }
        if !self.sums_to_m(a, b) {
            return Err(DiagramError::NotComplementary {
                slot,
                left: a.value(self.m),
                right: b.value(self.m),
                m: self.m,
            });
        }
        let mut labels = self.labels.clone();
        labels.splice(slot - 1..slot - 1, [a, b]);
        Self::new(self.m, labels)
    }

    /// Concatenation, used for disjoint unions.
    pub fn concat(&self, other: &StrandSeq) -> Result<Self, DiagramError> {
        if self.m != other.m {
            return Err(DiagramError::RankMismatch {
                left: self.m,
                right: other.m,
            });
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Ok(Self { m: self.m, labels })
    }
}

/// Renders as `(1,3)`; for `m = 2` the second orientation shows as `m-1`.
impl fmt::Display for StrandSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.labels.iter().map(|l| l.token(self.m)).collect();
        write!(f, "({})", vals.join(","))
    }
}

/// Label order created by a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CapOrder {
    /// `(1, m-1)`; DSL `order=lr`.
    FundDual,
    /// `(m-1, 1)`; DSL `order=rl`.
    DualFund,
}

impl CapOrder {
    pub fn labels(self) -> (Label, Label) {
        match self {
            CapOrder::FundDual => (Label::Fund, Label::Dual),
            CapOrder::DualFund => (Label::Dual, Label::Fund),
        }
    }

    /// The order whose labels are `(a, b)`, if they are complementary.
    pub fn from_labels(a: Label, b: Label) -> CapOrder {
        match (a, b) {
            (Label::Dual, Label::Fund) => CapOrder::DualFund,
            _ => CapOrder::FundDual,
        }
    }
}

/// Crossing type; type 1 and type 2 at the same slot are mutually inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingType {
    One,
    Two,
}

impl CrossingType {
    pub fn inverse(self) -> Self {
        match self {
            CrossingType::One => CrossingType::Two,
            CrossingType::Two => CrossingType::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            CrossingType::One => 1,
            CrossingType::Two => 2,
        }
    }

    /// Braid letter convention: positive letters are type 1.
    pub fn from_letter(letter: i64) -> Self {
        if letter > 0 {
            CrossingType::One
        } else {
            CrossingType::Two
        }
    }
}

/// One elementary diagram piece acting at 1-based `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Cap { slot: usize, order: CapOrder },
    Cup { slot: usize },
    Cross { slot: usize, kind: CrossingType },
    /// Merge vertex immediately followed by its split vertex.
    Dumbbell { slot: usize },
}

impl Generator {
    pub fn slot(&self) -> usize {
        match *self {
            Generator::Cap { slot, .. }
            | Generator::Cup { slot }
            | Generator::Cross { slot, .. }
            | Generator::Dumbbell { slot } => slot,
        }
    }

    /// Same generator moved to another slot.
    pub fn at(&self, slot: usize) -> Self {
        match *self {
            Generator::Cap { order, .. } => Generator::Cap { slot, order },
            Generator::Cup { .. } => Generator::Cup { slot },
            Generator::Cross { kind, .. } => Generator::Cross { slot, kind },
            Generator::Dumbbell { .. } => Generator::Dumbbell { slot },
        }
    }

    /// Number of strands consumed below and produced above.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Generator::Cap { .. } => (0, 2),
            Generator::Cup { .. } => (2, 0),
            Generator::Cross { .. } | Generator::Dumbbell { .. } => (2, 2),
        }
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self, Generator::Cross { .. })
    }

    /// The sequence above this generator, or why it cannot act on `seq`.
    pub fn target(&self, seq: &StrandSeq) -> Result<StrandSeq, DiagramError> {
        match *self {
            Generator::Cap { slot, order } => seq.insert_pair(slot, order.labels()),
            Generator::Cup { slot } => seq.drop_pair(slot),
            Generator::Cross { slot, .. } => seq.switch(slot),
            Generator::Dumbbell { slot } => {
                let (a, b) = seq.pair(slot)?;
                if a != b {
                    return Err(DiagramError::UnequalLabels {
                        slot,
                        left: a.value(seq.m),
                        right: b.value(seq.m),
                    });
                }
                Ok(seq.clone())
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Cap {
                slot,
                order: CapOrder::FundDual,
            } => write!(f, "cap {slot}"),
            Generator::Cap {
                slot,
                order: CapOrder::DualFund,
            } => write!(f, "cap {slot} order=rl"),
            Generator::Cup { slot } => write!(f, "cup {slot}"),
            Generator::Cross { slot, kind } => write!(f, "cross {slot} {}", kind.index()),
            Generator::Dumbbell { slot } => write!(f, "dumbbell {slot}"),
        }
    }
}

/// Walks `gens` from `bottom`, returning the top sequence or the first
/// offending generator.
pub fn validate(bottom: &StrandSeq, gens: &[Generator]) -> Result<StrandSeq, DiagramError> {
    let mut seq = bottom.clone();
    for (index, g) in gens.iter().enumerate() {
        seq = g.target(&seq).map_err(|e| DiagramError::AtGenerator {
            index,
            generator: *g,
            source: Box::new(e),
        })?;
    }
    Ok(seq)
}

/// A validated, composable stack of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TangleWord {
    bottom: StrandSeq,
    gens: Vec<Generator>,
    top: StrandSeq,
}

impl TangleWord {
    pub fn new(bottom: StrandSeq, gens: Vec<Generator>) -> Result<Self, DiagramError> {
        let top = validate(&bottom, &gens)?;
        Ok(Self { bottom, gens, top })
    }

    /// The closed word built on the empty sequence.
    pub fn closed(m: u32, gens: Vec<Generator>) -> Result<Self, DiagramError> {
        Self::new(StrandSeq::empty(m)?, gens)
    }

    pub fn identity(bottom: StrandSeq) -> Self {
        Self {
            top: bottom.clone(),
            bottom,
            gens: Vec::new(),
        }
    }

    pub fn m(&self) -> u32 {
        self.bottom.m
    }

    pub fn bottom(&self) -> &StrandSeq {
        &self.bottom
    }

    pub fn top(&self) -> &StrandSeq {
        &self.top
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn is_closed(&self) -> bool {
        self.bottom.is_empty() && self.top.is_empty()
    }

    pub fn is_crossingless(&self) -> bool {
        !self.gens.iter().any(Generator::is_crossing)
    }

    pub fn crossing_count(&self) -> usize {
        self.gens.iter().filter(|g| g.is_crossing()).count()
    }

    /// Stacks `other` on top of `self`.
    pub fn then(&self, other: &TangleWord) -> Result<TangleWord, DiagramError> {
        if other.bottom != self.top {
            // Revalidate so the caller gets a precise error.
            let mut gens = self.gens.clone();
            gens.extend_from_slice(&other.gens);
            return TangleWord::new(self.bottom.clone(), gens);
        }
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Ok(TangleWord {
            bottom: self.bottom.clone(),
            gens,
            top: other.top.clone(),
        })
    }

    /// Appends generators, validating them against the current top.
    pub fn extend(&self, more: &[Generator]) -> Result<TangleWord, DiagramError> {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(more);
        TangleWord::new(self.bottom.clone(), gens)
    }

    /// Sequences below each generator, plus the top: `gens.len() + 1` entries.
    pub fn slices(&self) -> Vec<StrandSeq> {
        let mut out = vec![self.bottom.clone()];
        for g in &self.gens {
            let next = g.target(out.last().unwrap()).expect("validated word");
            out.push(next);
        }
        out
    }

    /// Reverses every crossing type.
    pub fn mirror(&self) -> TangleWord {
        let gens = self
            .gens
            .iter()
            .map(|g| match *g {
                Generator::Cross { slot, kind } => Generator::Cross {
                    slot,
                    kind: kind.inverse(),
                },
                other => other,
            })
            .collect();
        TangleWord {
            bottom: self.bottom.clone(),
            gens,
            top: self.top.clone(),
        }
    }
}

/// Closure of a braid on `k` strands over `(1^k, (m-1)^k)`.
///
/// Builds `k` nested caps, then one crossing per letter on the first `k`
/// slots (positive letter: type 1, negative: type 2), then `k` nested cups.
pub fn braid_closure(k: usize, braid: &[i64], m: u32) -> Result<TangleWord, DiagramError> {
    if k == 0 {
        return Err(DiagramError::EmptyBraid);
    }
    let mut gens = Vec::with_capacity(2 * k + braid.len());
    for j in 0..k {
        gens.push(Generator::Cap {
            slot: j + 1,
            order: CapOrder::FundDual,
        });
    }
    for &letter in braid {
        let slot = letter.unsigned_abs() as usize;
        if letter == 0 || slot >= k {
            return Err(DiagramError::BraidLetter { letter, strands: k });
        }
        gens.push(Generator::Cross {
            slot,
            kind: CrossingType::from_letter(letter),
        });
    }
    for j in (1..=k).rev() {
        gens.push(Generator::Cup { slot: j });
    }
    TangleWord::closed(m, gens)
}

/// Rotation composite realizing an unlike crossing at `slot` of `seq`.
///
/// The strand labelled `m-1` is turned around with a cap and a cup so that
/// the crossing becomes one between two `1`-labelled strands, whose type is
/// the inverse of `kind`.
pub fn unlike_composite(
    seq: &StrandSeq,
    slot: usize,
    kind: CrossingType,
) -> Result<[Generator; 3], DiagramError> {
    let (a, b) = seq.pair(slot)?;
    if a == b {
        return Err(DiagramError::NotComplementary {
            slot,
            left: a.value(seq.m),
            right: b.value(seq.m),
            m: seq.m,
        });
    }
    let inner = Generator::Cross {
        slot: slot + 1,
        kind: kind.inverse(),
    };
    Ok(if a == Label::Dual {
        [
            Generator::Cap {
                slot: slot + 2,
                order: CapOrder::from_labels(b, a),
            },
            inner,
            Generator::Cup { slot },
        ]
    } else {
        [
            Generator::Cap {
                slot,
                order: CapOrder::from_labels(b, a),
            },
            inner,
            Generator::Cup { slot: slot + 2 },
        ]
    })
}

/// Rotation composite realizing a crossing of two `m-1` strands at `slot`:
/// the left strand is turned around, leaving an unlike crossing of the
/// inverse type.
pub fn dual_like_composite(slot: usize, kind: CrossingType) -> [Generator; 3] {
    [
        Generator::Cap {
            slot: slot + 2,
            order: CapOrder::FundDual,
        },
        Generator::Cross {
            slot: slot + 1,
            kind: kind.inverse(),
        },
        Generator::Cup { slot },
    ]
}

/// True when the crossing at `slot` of `seq` joins strands of different labels.
pub fn is_unlike(seq: &StrandSeq, slot: usize) -> bool {
    matches!(seq.pair(slot), Ok((a, b)) if a != b)
}

/// Replaces every unlike crossing by its rotation composite.
pub fn rewrite_unlike(word: &TangleWord) -> TangleWord {
    let mut gens = Vec::with_capacity(word.gens.len());
    let mut seq = word.bottom.clone();
    for g in &word.gens {
        match *g {
            Generator::Cross { slot, kind } if is_unlike(&seq, slot) => {
                let comp = unlike_composite(&seq, slot, kind).expect("validated word");
                gens.extend_from_slice(&comp);
            }
            other => gens.push(other),
        }
        seq = g.target(&seq).expect("validated word");
    }
    TangleWord::new(word.bottom.clone(), gens).expect("rotation composite preserves boundary")
}

/// One branch of a skein expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTerm {
    pub weight: LaurentPoly,
    pub word: TangleWord,
}

/// Weights `(identity, dumbbell)` of the two resolutions of a like crossing.
pub fn resolution_weights(m: u32, kind: CrossingType) -> (LaurentPoly, LaurentPoly) {
    let m = i64::from(m);
    match kind {
        CrossingType::One => (LaurentPoly::monomial(1, m - 1), LaurentPoly::monomial(-1, m)),
        CrossingType::Two => (LaurentPoly::monomial(1, 1 - m), LaurentPoly::monomial(-1, -m)),
    }
}

/// Expands every crossing into identity and dumbbell branches.
///
/// Branch `b` resolves crossing `j` (in word order) to the dumbbell iff bit
/// `j` of `b` is set; terms come out sorted by branch index.
pub fn resolve_crossings(word: &TangleWord) -> Result<Vec<ResolutionTerm>, DiagramError> {
    let slices = word.slices();
    let mut crossings = Vec::new();
    for (index, g) in word.gens.iter().enumerate() {
        if let Generator::Cross { slot, kind } = *g {
            if is_unlike(&slices[index], slot) {
                return Err(DiagramError::UnlikeCrossing { index });
            }
            crossings.push((index, kind));
        }
    }
    let c = crossings.len();
    let weights: Vec<_> = crossings
        .iter()
        .map(|&(_, kind)| resolution_weights(word.m(), kind))
        .collect();
    let mut terms = Vec::with_capacity(1 << c);
    for branch in 0u64..(1u64 << c) {
        let mut weight = LaurentPoly::one();
        let mut gens = Vec::with_capacity(word.gens.len());
        let mut next = 0;
        for (index, g) in word.gens.iter().enumerate() {
            if next < c && crossings[next].0 == index {
                let (w_id, w_u) = &weights[next];
                if branch >> next & 1 == 1 {
                    weight = &weight * w_u;
                    gens.push(Generator::Dumbbell { slot: g.slot() });
                } else {
                    weight = &weight * w_id;
                }
                next += 1;
            } else {
                gens.push(*g);
            }
        }
        let word = TangleWord::new(word.bottom.clone(), gens).expect("resolution preserves validity");
        terms.push(ResolutionTerm { weight, word });
    }
    Ok(terms)
}
