//! Link values by crossing resolution, and a Kauffman-bracket oracle for `m = 2`.

use num_bigint::BigInt;
use thiserror::Error;

use crate::diagram::{braid_closure, is_unlike, resolution_weights, rewrite_unlike, DiagramError, Generator, TangleWord};
use crate::ktheory::{Engine, EngineError};
use crate::laurent::LaurentPoly;

/// Largest braid index accepted by [`kauffman_bracket_jones`].
pub const MAX_BRACKET_STRANDS: usize = 8;
/// Largest crossing count accepted by [`kauffman_bracket_jones`].
pub const MAX_BRACKET_CROSSINGS: usize = 12;

#[derive(Debug, Error)]
pub enum SkeinError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("state sum too large: {strands} strands, {crossings} crossings (limits {MAX_BRACKET_STRANDS}, {MAX_BRACKET_CROSSINGS})")]
    TooLarge { strands: usize, crossings: usize },
    #[error("braid letter {letter} out of range for {strands} strands")]
    BraidLetter { letter: i64, strands: usize },
    #[error("convention matching needs rank 2, engine has rank {0}")]
    WrongRank(u32),
    #[error("no substitution maps the engine values onto the bracket values for {0}")]
    NoConvention(String),
}

/// Sum over all identity/dumbbell resolutions of the crossings of `word`
/// of weight times the value of the crossingless diagram.
///
/// Unlike crossings are first replaced by their rotation composites. The
/// expansion is depth-first, so only one partial diagram per crossing is
/// alive at a time.
pub fn evaluate_by_resolution(engine: &Engine, word: &TangleWord) -> Result<LaurentPoly, SkeinError> {
    if engine.m() != word.m() {
        return Err(EngineError::RankMismatch {
            engine: engine.m(),
            diagram: word.m(),
        }
        .into());
    }
    if !word.is_closed() {
        return Err(DiagramError::NotClosed {
            bottom: word.bottom().len(),
            top: word.top().len(),
        }
        .into());
    }
    let word = rewrite_unlike(word);
    let slices = word.slices();
    debug_assert!(word
        .gens()
        .iter()
        .enumerate()
        .all(|(i, g)| !g.is_crossing() || !is_unlike(&slices[i], g.slot())));
    let mut total = LaurentPoly::zero();
    let mut prefix = Vec::with_capacity(word.gens().len());
    expand(engine, &word, 0, &LaurentPoly::one(), &mut prefix, &mut total)?;
    Ok(total)
}

fn expand(
    engine: &Engine,
    word: &TangleWord,
    pos: usize,
    weight: &LaurentPoly,
    prefix: &mut Vec<Generator>,
    total: &mut LaurentPoly,
) -> Result<(), SkeinError> {
    let gens = word.gens();
    let Some(next) = gens[pos..].iter().position(Generator::is_crossing).map(|k| pos + k) else {
        let depth = prefix.len();
        prefix.extend_from_slice(&gens[pos..]);
        let leaf = TangleWord::new(word.bottom().clone(), prefix.clone())?;
        prefix.truncate(depth);
        total.add_scaled(weight, &engine.evaluate_closed(&leaf)?);
        return Ok(());
    };
    let Generator::Cross { slot, kind } = gens[next] else {
        unreachable!("position found a crossing")
    };
    let depth = prefix.len();
    prefix.extend_from_slice(&gens[pos..next]);
    let (w_id, w_u) = resolution_weights(word.m(), kind);
    expand(engine, word, next + 1, &(weight * &w_id), prefix, total)?;
    prefix.push(Generator::Dumbbell { slot });
    expand(engine, word, next + 1, &(weight * &w_u), prefix, total)?;
    prefix.truncate(depth);
    Ok(())
}

/// Jones polynomial of the closure of `braid` on `k` strands from the
/// Kauffman state sum, in the unnormalized form whose unknot value is
/// `q + q^-1`:
///
/// `(-1)^{n-} q^{n+ - 2n-} Σ_s (-q)^{r(s)} (q + q^-1)^{loops(s)}`
///
/// where `r(s)` counts 1-smoothings. Letter `+i` is a positive crossing of
/// strands `i`, `i+1`; its 0-smoothing keeps the strands vertical. For a
/// negative letter the 0-smoothing is the horizontal (cup-cap) one.
pub fn kauffman_bracket_jones(braid: &[i64], k: usize) -> Result<LaurentPoly, SkeinError> {
    let c = braid.len();
    if k == 0 || k > MAX_BRACKET_STRANDS || c > MAX_BRACKET_CROSSINGS {
        return Err(SkeinError::TooLarge { strands: k, crossings: c });
    }
    for &letter in braid {
        if letter == 0 || letter.unsigned_abs() as usize >= k {
            return Err(SkeinError::BraidLetter { letter, strands: k });
        }
    }
    let n_plus = braid.iter().filter(|&&l| l > 0).count() as i64;
    let n_minus = c as i64 - n_plus;
    let loop_value = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
    let minus_q = LaurentPoly::monomial(-1, 1);
    let mut sum = LaurentPoly::zero();
    for state in 0u32..(1 << c) {
        let r = state.count_ones();
        let loops = count_loops(braid, k, state);
        let term = &minus_q.pow(r) * &loop_value.pow(loops as u32);
        sum += &term;
    }
    let sign = if n_minus % 2 == 0 { 1 } else { -1 };
    Ok(&sum * &LaurentPoly::monomial(sign, n_plus - 2 * n_minus))
}

/// Number of closed loops of one smoothing state of the braid closure.
fn count_loops(braid: &[i64], k: usize, state: u32) -> usize {
    let c = braid.len();
    // Node (level, position): level j sits below crossing j; level c is
    // identified with level 0 by the closure.
    let node = |level: usize, p: usize| (level % c.max(1)) * k + p;
    let mut uf = UnionFind::new(c.max(1) * k);
    if c == 0 {
        return k;
    }
    for (j, &letter) in braid.iter().enumerate() {
        let i = letter.unsigned_abs() as usize - 1;
        let one = state >> j & 1 == 1;
        let horizontal = one == (letter > 0);
        for p in 0..k {
            if !horizontal || (p != i && p != i + 1) {
                uf.union(node(j, p), node(j + 1, p));
            }
        }
        if horizontal {
            uf.union(node(j, i), node(j, i + 1));
            uf.union(node(j + 1, i), node(j + 1, i + 1));
        }
    }
    uf.components()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// A link presented as a braid closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidLink {
    pub name: String,
    pub strands: usize,
    pub braid: Vec<i64>,
}

impl BraidLink {
    pub fn new(name: &str, strands: usize, braid: &[i64]) -> Self {
        Self {
            name: name.to_string(),
            strands,
            braid: braid.to_vec(),
        }
    }

    pub fn writhe(&self) -> i64 {
        self.braid.iter().map(|l| l.signum()).sum()
    }

    pub fn closure(&self, m: u32) -> Result<TangleWord, DiagramError> {
        braid_closure(self.strands, &self.braid, m)
    }
}

/// Unknot, both Hopf links, trefoil and figure-eight.
pub fn standard_links() -> Vec<BraidLink> {
    vec![
        BraidLink::new("unknot", 1, &[]),
        BraidLink::new("hopf+", 2, &[1, 1]),
        BraidLink::new("hopf-", 2, &[-1, -1]),
        BraidLink::new("trefoil", 2, &[1, 1, 1]),
        BraidLink::new("figure-eight", 3, &[1, -2, 1, -2]),
    ]
}

/// Map from engine output to bracket output:
/// `scale * P(sign * q^exponent) * q^(framing * writhe)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub scale: i8,
    pub sign: i8,
    pub exponent: i64,
    pub framing: i64,
}

impl Substitution {
    pub fn apply(&self, p: &LaurentPoly, writhe: i64) -> LaurentPoly {
        p.substitute(self.sign, self.exponent)
            .shift(self.framing * writhe)
            .scale(&BigInt::from(self.scale))
    }

    pub fn is_identity(&self) -> bool {
        *self
            == Substitution {
                scale: 1,
                sign: 1,
                exponent: 1,
                framing: 0,
            }
    }

    fn candidates() -> impl Iterator<Item = Substitution> {
        let signs = [1i8, -1];
        signs.into_iter().flat_map(move |scale| {
            signs.into_iter().flat_map(move |sign| {
                [1i64, -1].into_iter().flat_map(move |exponent| {
                    (-6i64..=6).map(move |framing| Substitution {
                        scale,
                        sign,
                        exponent,
                        framing,
                    })
                })
            })
        })
    }
}

impl std::fmt::Display for Substitution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        write!(
            f,
            "P -> {}P({s}q^{}) * q^({}*writhe)",
            if self.scale < 0 { "-" } else { "" },
            self.exponent,
            self.framing
        )
    }
}

/// One link compared under the chosen substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionCheck {
    pub name: String,
    pub engine: LaurentPoly,
    pub bracket: LaurentPoly,
    /// `bracket - substitution(engine)`.
    pub residual: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionReport {
    pub substitution: Substitution,
    /// Other substitutions that also fit the fixing links.
    pub alternatives: Vec<Substitution>,
    pub fixed: Vec<ConventionCheck>,
    pub verified: Vec<ConventionCheck>,
}

impl ConventionReport {
    pub fn ok(&self) -> bool {
        self.verified.iter().all(|c| c.residual.is_zero())
    }
}

/// Finds the unique substitution that maps the rank-2 engine values of the
/// `fix` links onto their bracket values, then reports the residuals of the
/// `verify` links under it.
pub fn match_convention_m2(engine: &Engine, fix: &[BraidLink], verify: &[BraidLink]) -> Result<ConventionReport, SkeinError> {
    if engine.m() != 2 {
        return Err(SkeinError::WrongRank(engine.m()));
    }
    let values = |links: &[BraidLink]| -> Result<Vec<(BraidLink, LaurentPoly, LaurentPoly)>, SkeinError> {
        links
            .iter()
            .map(|l| {
                let e = engine.evaluate_closed(&l.closure(2)?)?;
                let b = kauffman_bracket_jones(&l.braid, l.strands)?;
                Ok((l.clone(), e, b))
            })
            .collect()
    };
    let fixing = values(fix)?;
    let mut fits: Vec<Substitution> = Substitution::candidates()
        .filter(|s| fixing.iter().all(|(l, e, b)| &s.apply(e, l.writhe()) == b))
        .collect();
    // Links with palindromic values up to a shift (such as both Hopf links)
    // admit q -> q^-1 with a compensating framing; take the smallest framing.
    fits.sort_by_key(|s| (s.framing.abs(), s.exponent < 0, s.sign < 0, s.scale < 0));
    if fits.is_empty() {
        let names: Vec<_> = fix.iter().map(|l| l.name.as_str()).collect();
        return Err(SkeinError::NoConvention(names.join(", ")));
    }
    let substitution = fits.remove(0);
    let report = |rows: Vec<(BraidLink, LaurentPoly, LaurentPoly)>| {
        rows.into_iter()
            .map(|(l, engine, bracket)| {
                let residual = &bracket - &substitution.apply(&engine, l.writhe());
                ConventionCheck {
                    name: l.name,
                    engine,
                    bracket,
                    residual,
                }
            })
            .collect::<Vec<_>>()
    };
    Ok(ConventionReport {
        substitution,
        alternatives: fits,
        fixed: report(fixing),
        verified: report(values(verify)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{CapOrder, CrossingType};

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn bracket_small_links() {
        assert_eq!(kauffman_bracket_jones(&[], 1).unwrap(), p("q + q^-1"));
        assert_eq!(kauffman_bracket_jones(&[], 2).unwrap(), p("q^2 + 2 + q^-2"));
        assert_eq!(kauffman_bracket_jones(&[1], 2).unwrap(), p("q + q^-1"));
        assert_eq!(kauffman_bracket_jones(&[-1], 2).unwrap(), p("q + q^-1"));
        assert_eq!(kauffman_bracket_jones(&[1, 1], 2).unwrap(), p("1 + q^2 + q^4 + q^6"));
        assert_eq!(kauffman_bracket_jones(&[1, 1, 1], 2).unwrap(), p("q + q^3 + q^5 - q^9"));
        assert_eq!(
            kauffman_bracket_jones(&[1, -2, 1, -2], 3).unwrap(),
            p("q^5 + q^-5")
        );
    }

    #[test]
    fn bracket_mirror() {
        for l in standard_links() {
            let neg: Vec<i64> = l.braid.iter().map(|x| -x).collect();
            assert_eq!(
                kauffman_bracket_jones(&neg, l.strands).unwrap(),
                kauffman_bracket_jones(&l.braid, l.strands).unwrap().mirror(),
                "{}",
                l.name
            );
        }
    }

    #[test]
    fn bracket_limits() {
        assert!(matches!(kauffman_bracket_jones(&[], 9), Err(SkeinError::TooLarge { .. })));
        assert!(matches!(kauffman_bracket_jones(&[1; 13], 2), Err(SkeinError::TooLarge { .. })));
        assert!(matches!(kauffman_bracket_jones(&[2], 2), Err(SkeinError::BraidLetter { .. })));
    }

    #[test]
    fn resolution_matches_direct() {
        for m in 2..=4 {
            let e = Engine::new(m).unwrap();
            for l in standard_links() {
                let w = l.closure(m).unwrap();
                assert_eq!(evaluate_by_resolution(&e, &w).unwrap(), e.evaluate_closed(&w).unwrap(), "m={m} {}", l.name);
            }
        }
    }

    #[test]
    fn resolution_of_crossingless_and_kink() {
        for m in 2..=4 {
            let e = Engine::new(m).unwrap();
            let circle = TangleWord::closed(m, vec![Generator::Cap { slot: 1, order: CapOrder::FundDual }, Generator::Cup { slot: 1 }]).unwrap();
            assert_eq!(evaluate_by_resolution(&e, &circle).unwrap(), LaurentPoly::quantum_int(m));
            for kind in [CrossingType::One, CrossingType::Two] {
                // A circle with one curl: cap, a second cap inside, cross
                // the two 1-strands, cup both.
                let kink = TangleWord::closed(
                    m,
                    vec![
                        Generator::Cap { slot: 1, order: CapOrder::FundDual },
                        Generator::Cap { slot: 2, order: CapOrder::DualFund },
                        Generator::Cross { slot: 2, kind },
                        Generator::Cup { slot: 2 },
                        Generator::Cup { slot: 1 },
                    ],
                )
                .unwrap();
                let v = evaluate_by_resolution(&e, &kink).unwrap();
                assert_eq!(v, e.evaluate_closed(&kink).unwrap());
            }
        }
    }

    #[test]
    fn convention_is_identity() {
        let e = Engine::new(2).unwrap();
        let links = standard_links();
        let report = match_convention_m2(&e, &links[..3], &links[3..]).unwrap();
        assert!(report.ok(), "{report:?}");
        assert!(report.substitution.is_identity(), "{}", report.substitution);
        // q -> q^-1 with framing 3 also fits both Hopf links but not the trefoil.
        assert_eq!(report.alternatives.len(), 1);
        let alt = report.alternatives[0];
        assert_eq!((alt.exponent, alt.framing), (-1, 3));
        let tref = &links[3];
        let v = e.evaluate_closed(&tref.closure(2).unwrap()).unwrap();
        assert_ne!(alt.apply(&v, tref.writhe()), kauffman_bracket_jones(&tref.braid, 2).unwrap());
    }

    #[test]
    fn convention_needs_rank_two() {
        let e = Engine::new(3).unwrap();
        assert!(matches!(match_convention_m2(&e, &[], &[]), Err(SkeinError::WrongRank(3))));
    }
}
