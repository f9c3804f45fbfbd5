//! Relation battery: Reidemeister, height exchange, pitchfork, MOY, Hecke and
//! braid identities checked as exact operator-matrix equalities.
//!
//! Every instance is generated over all strand sequences of a given length
//! and all valid slots. For the third Reidemeister move the two type triples
//! `(l, l', l)` with `l' != l` are not braid-group identities; those
//! instances are recorded as passing when the two sides *differ*.

use std::fmt;

use crate::diagram::{CapOrder, CrossingType, Generator, Label, StrandSeq};
use crate::ktheory::{Engine, EngineError, OperatorMatrix};
use crate::laurent::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    R0,
    R1,
    R2,
    R3,
    HeightExchange,
    Pitchfork,
    MoyIa,
    MoyIb,
    MoyIia,
    MoyIib,
    MoyIii,
    Hecke,
    Braid,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::R0,
        Family::R1,
        Family::R2,
        Family::R3,
        Family::HeightExchange,
        Family::Pitchfork,
        Family::MoyIa,
        Family::MoyIb,
        Family::MoyIia,
        Family::MoyIib,
        Family::MoyIii,
        Family::Hecke,
        Family::Braid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::R0 => "R0",
            Family::R1 => "R1",
            Family::R2 => "R2",
            Family::R3 => "R3",
            Family::HeightExchange => "height-exchange",
            Family::Pitchfork => "pitchfork",
            Family::MoyIa => "MOY-ia",
            Family::MoyIb => "MOY-ib",
            Family::MoyIia => "MOY-iia",
            Family::MoyIib => "MOY-iib",
            Family::MoyIii => "MOY-iii",
            Family::Hecke => "Hecke",
            Family::Braid => "braid",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one relation instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub family: Family,
    pub instance: String,
    pub passed: bool,
}

/// Per-family tally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySummary {
    pub family: Family,
    pub passed: usize,
    pub total: usize,
}

impl FamilySummary {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BatteryConfig {
    /// Largest bottom sequence length.
    pub max_n: usize,
    /// Largest intermediate sequence length for height exchange.
    pub max_height_len: usize,
    pub matrix_cap: u64,
}

impl BatteryConfig {
    pub fn new(max_n: usize) -> Self {
        Self {
            max_n,
            max_height_len: max_n + 1,
            matrix_cap: crate::ktheory::DEFAULT_MATRIX_CAP,
        }
    }
}

/// Every strand sequence of length `n`: `2^n` label (orientation) patterns.
pub fn all_sequences(m: u32, n: usize) -> Vec<StrandSeq> {
    (0..1usize << n)
        .map(|bits| {
            let labels = (0..n)
                .map(|j| if bits >> (n - 1 - j) & 1 == 1 { Label::Dual } else { Label::Fund })
                .collect();
            StrandSeq::new(m, labels).expect("m >= 2")
        })
        .collect()
}

fn order_for(first: Label) -> CapOrder {
    CapOrder::from_labels(first, first.reversed())
}

use CrossingType::{One, Two};
use Generator::{Cap, Cross, Cup, Dumbbell};

struct Ctx<'a> {
    engine: &'a Engine,
    cfg: BatteryConfig,
    out: Vec<RelationCheck>,
}

impl Ctx<'_> {
    fn m(&self) -> u32 {
        self.engine.m()
    }

    fn mat(&self, bottom: &StrandSeq, gens: &[Generator]) -> Result<OperatorMatrix, EngineError> {
        self.engine.operator_matrix(bottom, gens, self.cfg.matrix_cap)
    }

    fn push(&mut self, family: Family, bottom: &StrandSeq, detail: String, passed: bool) {
        self.out.push(RelationCheck {
            family,
            instance: format!("{bottom} {detail}"),
            passed,
        });
    }

    fn words_equal(
        &mut self,
        family: Family,
        bottom: &StrandSeq,
        lhs: &[Generator],
        rhs: &[Generator],
        detail: String,
    ) -> Result<(), EngineError> {
        let passed = self.mat(bottom, lhs)? == self.mat(bottom, rhs)?;
        self.push(family, bottom, detail, passed);
        Ok(())
    }

    fn word_scalar(
        &mut self,
        family: Family,
        bottom: &StrandSeq,
        word: &[Generator],
        scalar: &LaurentPoly,
        detail: String,
    ) -> Result<(), EngineError> {
        let id = OperatorMatrix::identity(bottom.clone());
        let passed = self.mat(bottom, word)? == id.scale(scalar);
        self.push(family, bottom, detail, passed);
        Ok(())
    }

    fn for_sequences(
        &mut self,
        lengths: impl IntoIterator<Item = usize>,
        mut f: impl FnMut(&mut Self, &StrandSeq) -> Result<(), EngineError>,
    ) -> Result<(), EngineError> {
        for n in lengths {
            for seq in all_sequences(self.m(), n) {
                f(self, &seq)?;
            }
        }
        Ok(())
    }

    fn r0(&mut self) -> Result<(), EngineError> {
        self.for_sequences(1..=self.cfg.max_n, |c, b| {
            for i in 1..=b.len() {
                let x = b.label(i).unwrap();
                let a = [Cap { slot: i, order: order_for(x) }, Cup { slot: i + 1 }];
                c.word_scalar(Family::R0, b, &a, &LaurentPoly::one(), format!("F^{}G^{i}", i + 1))?;
                let bb = [Cap { slot: i + 1, order: order_for(x.reversed()) }, Cup { slot: i }];
                c.word_scalar(Family::R0, b, &bb, &LaurentPoly::one(), format!("F^{i}G^{}", i + 1))?;
            }
            Ok(())
        })
    }

    fn r1(&mut self) -> Result<(), EngineError> {
        self.for_sequences(1..=self.cfg.max_n, |c, b| {
            for i in 1..=b.len() {
                let x = b.label(i).unwrap();
                for l in [One, Two] {
                    let a = [
                        Cap { slot: i, order: order_for(x.reversed()) },
                        Cross { slot: i + 1, kind: l },
                        Cup { slot: i },
                    ];
                    c.word_scalar(Family::R1, b, &a, &LaurentPoly::one(), format!("F^{i}T^{}({})G^{i}", i + 1, l.index()))?;
                    let bb = [
                        Cap { slot: i + 1, order: order_for(x) },
                        Cross { slot: i, kind: l },
                        Cup { slot: i + 1 },
                    ];
                    c.word_scalar(
                        Family::R1,
                        b,
                        &bb,
                        &LaurentPoly::one(),
                        format!("F^{}T^{i}({})G^{}", i + 1, l.index(), i + 1),
                    )?;
                }
            }
            Ok(())
        })
    }

    fn r2(&mut self) -> Result<(), EngineError> {
        self.for_sequences(2..=self.cfg.max_n, |c, b| {
            for i in 1..b.len() {
                let kind = if crate::diagram::is_unlike(b, i) { "unlike" } else { "like" };
                for l in [One, Two] {
                    let w = [Cross { slot: i, kind: l }, Cross { slot: i, kind: l.inverse() }];
                    c.word_scalar(
                        Family::R2,
                        b,
                        &w,
                        &LaurentPoly::one(),
                        format!("{kind} T^{i}({})T^{i}({})", l.inverse().index(), l.index()),
                    )?;
                }
            }
            Ok(())
        })
    }

    fn r3(&mut self, family: Family) -> Result<(), EngineError> {
        self.for_sequences(3..=self.cfg.max_n, |c, b| {
            for i in 1..=b.len() - 2 {
                for l1 in [One, Two] {
                    for l2 in [One, Two] {
                        for l3 in [One, Two] {
                            let braid_identity = !(l1 == l3 && l2 != l1);
                            if family == Family::Braid && !(l1 == l2 && l2 == l3) {
                                continue;
                            }
                            let lhs = [
                                Cross { slot: i, kind: l1 },
                                Cross { slot: i + 1, kind: l2 },
                                Cross { slot: i, kind: l3 },
                            ];
                            let rhs = [
                                Cross { slot: i + 1, kind: l3 },
                                Cross { slot: i, kind: l2 },
                                Cross { slot: i + 1, kind: l1 },
                            ];
                            let equal = c.mat(b, &lhs)? == c.mat(b, &rhs)?;
                            let types = format!("({},{},{}) at {i}", l1.index(), l2.index(), l3.index());
                            if braid_identity {
                                c.push(family, b, types, equal);
                            } else {
                                c.push(family, b, format!("{types} distinct (not a braid identity)"), !equal);
                            }
                        }
                    }
                }
            }
            Ok(())
        })
    }

    fn height_exchange(&mut self) -> Result<(), EngineError> {
        let max_len = self.cfg.max_height_len;
        self.for_sequences(0..=self.cfg.max_n, |c, b| {
            let cands = candidates(b);
            for ga in &cands {
                for gb in &cands {
                    let (ia, oa) = ga.arity();
                    let (ib, ob) = gb.arity();
                    let (sa, sb) = (ga.slot(), gb.slot());
                    if sb < sa + ia || (ia == 0 && ib == 0 && sb == sa) {
                        continue;
                    }
                    let (da, db) = (oa as isize - ia as isize, ob as isize - ib as isize);
                    let peak = b.len() as isize + [0, da, db, da + db].into_iter().max().unwrap();
                    if peak > max_len as isize {
                        continue;
                    }
                    let shifted = gb.at(sb + oa - ia);
                    let lhs = [*ga, shifted];
                    let rhs = [*gb, *ga];
                    c.words_equal(Family::HeightExchange, b, &lhs, &rhs, format!("[{ga}] vs [{gb}]"))?;
                }
            }
            Ok(())
        })
    }

    fn pitchfork(&mut self) -> Result<(), EngineError> {
        self.for_sequences(1..=self.cfg.max_n, |c, b| {
            for i in 1..=b.len() {
                for order in [CapOrder::FundDual, CapOrder::DualFund] {
                    for l in [One, Two] {
                        let lhs = [Cap { slot: i + 1, order }, Cross { slot: i, kind: l }];
                        let rhs = [Cap { slot: i, order }, Cross { slot: i + 1, kind: l.inverse() }];
                        c.words_equal(
                            Family::Pitchfork,
                            b,
                            &lhs,
                            &rhs,
                            format!("T^{i}({})G^{} = T^{}({})G^{i} [{}]", l.index(), i + 1, i + 1, l.inverse().index(), Cap { slot: 1, order }),
                        )?;
                    }
                }
            }
            Ok(())
        })
    }

    fn moy_ia(&mut self) -> Result<(), EngineError> {
        let qm = LaurentPoly::quantum_int(self.m());
        self.for_sequences(0..=self.cfg.max_n, |c, b| {
            for i in 1..=b.len() + 1 {
                for order in [CapOrder::FundDual, CapOrder::DualFund] {
                    let w = [Cap { slot: i, order }, Cup { slot: i }];
                    c.word_scalar(Family::MoyIa, b, &w, &qm, format!("F^{i}G^{i} [{}]", Cap { slot: i, order }))?;
                }
            }
            Ok(())
        })
    }

    fn moy_ib(&mut self) -> Result<(), EngineError> {
        let m = self.m();
        let q = LaurentPoly::quantum_int(m - 1);
        self.for_sequences(1..=self.cfg.max_n, |c, b| {
            for i in 1..=b.len() {
                let x = b.label(i).unwrap();
                let a = [Cap { slot: i + 1, order: order_for(x) }, Dumbbell { slot: i }, Cup { slot: i + 1 }];
                c.word_scalar(Family::MoyIb, b, &a, &q, format!("F^{}U^{i}G^{}", i + 1, i + 1))?;
                let bb = [
                    Cap { slot: i, order: order_for(x.reversed()) },
                    Dumbbell { slot: i + 1 },
                    Cup { slot: i },
                ];
                c.word_scalar(Family::MoyIb, b, &bb, &q, format!("F^{i}U^{}G^{i}", i + 1))?;
            }
            Ok(())
        })
    }

    fn moy_iia(&mut self) -> Result<(), EngineError> {
        let two = LaurentPoly::quantum_int(2);
        self.for_sequences(2..=self.cfg.max_n, |c, b| {
            for i in 1..b.len() {
                if crate::diagram::is_unlike(b, i) {
                    continue;
                }
                let uu = c.mat(b, &[Dumbbell { slot: i }, Dumbbell { slot: i }])?;
                let u = c.mat(b, &[Dumbbell { slot: i }])?;
                let passed = uu == u.scale(&two);
                c.push(Family::MoyIia, b, format!("U^{i}U^{i} = [2]U^{i}"), passed);
            }
            Ok(())
        })
    }

    fn moy_iib(&mut self) -> Result<(), EngineError> {
        let m = self.m();
        let q = LaurentPoly::quantum_int(m - 2);
        self.for_sequences(2..=self.cfg.max_n, |c, b| {
            for i in 2..=b.len() {
                if !crate::diagram::is_unlike(b, i - 1) {
                    continue;
                }
                let x = b.label(i - 1).unwrap();
                let order = order_for(x);
                let rhs = c
                    .mat(b, &[Cup { slot: i - 1 }, Cap { slot: i - 1, order }])?
                    .add(&OperatorMatrix::identity(b.clone()).scale(&q));
                for (first, second) in [(i - 1, i + 1), (i + 1, i - 1)] {
                    let lhs = c.mat(
                        b,
                        &[
                            Cap { slot: i, order },
                            Dumbbell { slot: first },
                            Dumbbell { slot: second },
                            Cup { slot: i },
                        ],
                    )?;
                    c.push(
                        Family::MoyIib,
                        b,
                        format!("F^{i}U^{second}U^{first}G^{i} = G^{j}F^{j} + [m-2]", j = i - 1),
                        lhs == rhs,
                    );
                }
            }
            Ok(())
        })
    }

    fn moy_iii(&mut self) -> Result<(), EngineError> {
        self.for_sequences(3..=self.cfg.max_n, |c, b| {
            for i in 1..=b.len() - 2 {
                let labels = [b.label(i), b.label(i + 1), b.label(i + 2)];
                if labels[0] != labels[1] || labels[1] != labels[2] {
                    continue;
                }
                let (u1, u2) = (Dumbbell { slot: i }, Dumbbell { slot: i + 1 });
                let lhs = c.mat(b, &[u2, u1, u2])?.add(&c.mat(b, &[u1])?);
                let rhs = c.mat(b, &[u1, u2, u1])?.add(&c.mat(b, &[u2])?);
                c.push(Family::MoyIii, b, format!("at {i}"), lhs == rhs);
            }
            Ok(())
        })
    }

    fn hecke(&mut self) -> Result<(), EngineError> {
        let m = i64::from(self.m());
        self.for_sequences(2..=self.cfg.max_n, |c, b| {
            for i in 1..b.len() {
                if crate::diagram::is_unlike(b, i) {
                    continue;
                }
                let t = c.mat(b, &[Cross { slot: i, kind: Two }])?;
                let id = OperatorMatrix::identity(b.clone());
                let left = t.sub(&id.scale(&LaurentPoly::monomial(1, 1 - m)));
                let right = t.add(&id.scale(&LaurentPoly::monomial(1, -1 - m)));
                c.push(Family::Hecke, b, format!("T^{i}(2)"), left.then(&right).is_zero());
            }
            Ok(())
        })
    }
}

/// Every generator that applies to `seq`, in a fixed order.
pub fn candidates(seq: &StrandSeq) -> Vec<Generator> {
    let n = seq.len();
    let mut out = Vec::new();
    for slot in 1..=n + 1 {
        for order in [CapOrder::FundDual, CapOrder::DualFund] {
            out.push(Cap { slot, order });
        }
    }
    for slot in 1..n {
        for g in [
            Cup { slot },
            Cross { slot, kind: One },
            Cross { slot, kind: Two },
            Dumbbell { slot },
        ] {
            if g.target(seq).is_ok() {
                out.push(g);
            }
        }
    }
    out
}

/// Runs one family.
pub fn run_family(engine: &Engine, family: Family, cfg: BatteryConfig) -> Result<Vec<RelationCheck>, EngineError> {
    let mut ctx = Ctx {
        engine,
        cfg,
        out: Vec::new(),
    };
    match family {
        Family::R0 => ctx.r0()?,
        Family::R1 => ctx.r1()?,
        Family::R2 => ctx.r2()?,
        Family::R3 => ctx.r3(Family::R3)?,
        Family::Braid => ctx.r3(Family::Braid)?,
        Family::HeightExchange => ctx.height_exchange()?,
        Family::Pitchfork => ctx.pitchfork()?,
        Family::MoyIa => ctx.moy_ia()?,
        Family::MoyIb => ctx.moy_ib()?,
        Family::MoyIia => ctx.moy_iia()?,
        Family::MoyIib => ctx.moy_iib()?,
        Family::MoyIii => ctx.moy_iii()?,
        Family::Hecke => ctx.hecke()?,
    }
    Ok(ctx.out)
}

/// Runs every family in [`Family::ALL`] order.
pub fn run_battery(engine: &Engine, cfg: BatteryConfig) -> Result<Vec<RelationCheck>, EngineError> {
    let mut out = Vec::new();
    for family in Family::ALL {
        out.extend(run_family(engine, family, cfg)?);
    }
    Ok(out)
}

/// Per-family pass counts, in [`Family::ALL`] order, omitting families
/// with no instances.
pub fn summarize(checks: &[RelationCheck]) -> Vec<FamilySummary> {
    Family::ALL
        .iter()
        .filter_map(|&family| {
            let rows: Vec<_> = checks.iter().filter(|c| c.family == family).collect();
            (!rows.is_empty()).then(|| FamilySummary {
                family,
                passed: rows.iter().filter(|c| c.passed).count(),
                total: rows.len(),
            })
        })
        .collect()
}
