//! Two-slot coefficient tables for the dumbbell and crossing operators.
//!
//! Every local operator acts on the pair `(delta(i), delta(i+1))` with
//! coefficients that do not depend on `i`, so each is stored once per rank
//! as a table indexed by the source pair.

use crate::diagram::CrossingType;
use crate::laurent::LaurentPoly;

/// Image of one source pair: target pairs with coefficients.
pub type LocalImage = Vec<((u8, u8), LaurentPoly)>;

/// Table indexed by `a * m + b` for the source pair `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalOp {
    m: u32,
    images: Vec<LocalImage>,
}

impl LocalOp {
    pub fn from_fn(m: u32, mut f: impl FnMut(u8, u8) -> LocalImage) -> Self {
        let mut images = Vec::with_capacity((m * m) as usize);
        for a in 0..m as u8 {
            for b in 0..m as u8 {
                let mut img = f(a, b);
                img.retain(|(_, c)| !c.is_zero());
                img.sort_by(|x, y| x.0.cmp(&y.0));
                images.push(img);
            }
        }
        Self { m, images }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn image(&self, a: u8, b: u8) -> &LocalImage {
        &self.images[a as usize * self.m as usize + b as usize]
    }

    /// `x * self + y * other`, entrywise.
    pub fn combine(&self, x: &LaurentPoly, other: &LocalOp, y: &LaurentPoly) -> LocalOp {
        LocalOp::from_fn(self.m, |a, b| {
            let mut acc: std::collections::BTreeMap<(u8, u8), LaurentPoly> = Default::default();
            for (t, c) in self.image(a, b) {
                *acc.entry(*t).or_default() += &(x * c);
            }
            for (t, c) in other.image(a, b) {
                *acc.entry(*t).or_default() += &(y * c);
            }
            acc.into_iter().collect()
        })
    }

    pub fn identity(m: u32) -> LocalOp {
        LocalOp::from_fn(m, |a, b| vec![((a, b), LaurentPoly::one())])
    }
}

/// Merge-then-split operator on two `1`-labelled strands, in the E-monomial
/// basis: the image of `E_i^a E_{i+1}^b`.
pub(crate) fn dumbbell_e_image(a: u8, b: u8) -> LocalImage {
    if a == b {
        return Vec::new();
    }
    if a > b {
        return dumbbell_e_image(b, a)
            .into_iter()
            .map(|(t, c)| (t, -c))
            .collect();
    }
    let q = LaurentPoly::q();
    let qinv = LaurentPoly::monomial(1, -1);
    let mut out = vec![((a, b), q.clone())];
    for t in 1..(b - a) {
        out.push(((a + t, b - t), &q - &qinv));
    }
    out.push(((b, a), -qinv));
    out
}

/// The same operator in the W basis. The basis change contributes
/// `q^(a' - a)` to a term `(a', b')` coming from `(a, b)`, independently of
/// the slot.
pub fn dumbbell_fund(m: u32) -> LocalOp {
    LocalOp::from_fn(m, |a, b| {
        dumbbell_e_image(a, b)
            .into_iter()
            .map(|((x, y), c)| ((x, y), c.shift(i64::from(x) - i64::from(a))))
            .collect()
    })
}

/// Crossing from a dumbbell table: type 2 is `q^-m (q - U)`, type 1 is
/// `q^m (q^-1 - U)`.
pub fn crossing_from_dumbbell(u: &LocalOp, kind: CrossingType) -> LocalOp {
    let m = i64::from(u.m());
    let id = LocalOp::identity(u.m());
    match kind {
        CrossingType::Two => id.combine(
            &LaurentPoly::monomial(1, 1 - m),
            u,
            &LaurentPoly::monomial(-1, -m),
        ),
        CrossingType::One => id.combine(
            &LaurentPoly::monomial(1, m - 1),
            u,
            &LaurentPoly::monomial(-1, m),
        ),
    }
}

/// Dumbbell recovered from a type 2 crossing: `q - q^m T(2)`.
pub fn dumbbell_from_crossing(t2: &LocalOp) -> LocalOp {
    let m = i64::from(t2.m());
    LocalOp::identity(t2.m()).combine(&LaurentPoly::q(), t2, &LaurentPoly::monomial(-1, m))
}
