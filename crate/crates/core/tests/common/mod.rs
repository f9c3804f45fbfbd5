//! Shared fixtures: seeded random words and a small link corpus.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tangle_core::diagram::{CapOrder, CrossingType, Generator, Label};
use tangle_core::relations::candidates;
use tangle_core::skein::{standard_links, BraidLink};
use tangle_core::{parse_dsl, StrandSeq, TangleWord};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_seq(rng: &mut impl Rng, m: u32, n: usize) -> StrandSeq {
    let labels = (0..n).map(|_| if rng.gen_bool(0.5) { Label::Fund } else { Label::Dual }).collect();
    StrandSeq::new(m, labels).unwrap()
}

/// Random valid word on a random bottom of length `n`, with `len`
/// generators and every intermediate sequence at most `max_width` long.
pub fn random_word(rng: &mut impl Rng, m: u32, n: usize, len: usize, max_width: usize) -> TangleWord {
    let bottom = random_seq(rng, m, n);
    let mut seq = bottom.clone();
    let mut gens = Vec::with_capacity(len);
    for _ in 0..len {
        let options: Vec<Generator> = candidates(&seq)
            .into_iter()
            .filter(|g| g.target(&seq).map(|t| t.len() <= max_width).unwrap_or(false))
            .collect();
        let Some(g) = options.choose(rng) else { break };
        seq = g.target(&seq).unwrap();
        gens.push(*g);
    }
    TangleWord::new(bottom, gens).unwrap()
}

/// Random closed crossingless diagram: caps, cups and dumbbells, ending
/// with cups that close every remaining strand.
pub fn random_crossingless_closed(rng: &mut impl Rng, m: u32, steps: usize, max_width: usize) -> TangleWord {
    let mut seq = StrandSeq::empty(m).unwrap();
    let mut gens = Vec::new();
    for _ in 0..steps {
        let options: Vec<Generator> = candidates(&seq)
            .into_iter()
            .filter(|g| !g.is_crossing())
            .filter(|g| g.target(&seq).map(|t| t.len() <= max_width).unwrap_or(false))
            .collect();
        let Some(g) = options.choose(rng) else { break };
        seq = g.target(&seq).unwrap();
        gens.push(*g);
    }
    close_with_cups(m, gens, seq)
}

fn close_with_cups(m: u32, mut gens: Vec<Generator>, mut seq: StrandSeq) -> TangleWord {
    while !seq.is_empty() {
        // Some adjacent pair is always oppositely oriented while the
        // sequence has equally many strands of each label.
        let slot = (1..seq.len())
            .find(|&i| seq.drop_pair(i).is_ok())
            .expect("balanced sequence has a cup position");
        gens.push(Generator::Cup { slot });
        seq = seq.drop_pair(slot).unwrap();
    }
    TangleWord::closed(m, gens).unwrap()
}

/// Braid links used across the suites, all with at most four crossings.
pub fn braid_corpus() -> Vec<BraidLink> {
    let mut links = standard_links();
    links.extend([
        BraidLink::new("unlink2", 2, &[]),
        BraidLink::new("unknot-kink", 2, &[1]),
        BraidLink::new("trefoil-", 2, &[-1, -1, -1]),
        BraidLink::new("torus-2-4", 2, &[1, 1, 1, 1]),
        BraidLink::new("unknot-3", 3, &[1, -2]),
        BraidLink::new("hopf-3", 3, &[1, 1, 2]),
    ]);
    links
}

/// Closed diagrams that are not braid closures: orientation-mixed caps,
/// unlike crossings and crossings of `m-1` strands.
pub fn extra_closed_diagrams(m: u32) -> Vec<(String, TangleWord)> {
    let texts = [
        ("twisted-pair", "cap 1\ncap 3 order=rl\ncross 2 1\ncross 2 1\ncup 3\ncup 1\n"),
        ("unlike-hopf", "cap 1\ncap 3\ncross 2 2\ncross 2 2\ncup 3\ncup 1\n"),
        ("dual-trefoil", "cap 1 order=rl\ncap 2 order=rl\ncross 1 1\ncross 1 1\ncross 1 1\ncup 2\ncup 1\n"),
        ("dumbbell-theta", "cap 1\ncap 3\ncross 2 1\ndumbbell 1\ncross 2 2\ncup 3\ncup 1\n"),
    ];
    texts
        .iter()
        .map(|(name, body)| (name.to_string(), parse_dsl(body, Some(m)).unwrap()))
        .collect()
}

/// Every closed word of the corpus for rank `m`.
pub fn closed_corpus(m: u32) -> Vec<(String, TangleWord)> {
    let mut out: Vec<_> = braid_corpus()
        .into_iter()
        .map(|l| (l.name.clone(), l.closure(m).unwrap()))
        .collect();
    out.extend(extra_closed_diagrams(m));
    out
}

/// Inserts a small circle at `slot` before generator `level`, lets that
/// generator act beside it and removes the circle right after. Returns
/// `None` if the generator would touch the circle.
pub fn with_circle(word: &TangleWord, level: usize, slot: usize) -> Option<TangleWord> {
    let gens = word.gens();
    let g = *gens.get(level)?;
    let (input, output) = g.arity();
    let moved = if g.slot() + input <= slot && (input > 0 || g.slot() < slot) {
        // Left of the circle: the circle shifts by the change in width.
        let cup_slot = (slot as isize + output as isize - input as isize) as usize;
        (g, cup_slot)
    } else if g.slot() >= slot {
        (g.at(g.slot() + 2), slot)
    } else {
        return None;
    };
    let mut out = gens[..level].to_vec();
    out.push(Generator::Cap { slot, order: CapOrder::FundDual });
    out.push(moved.0);
    out.push(Generator::Cup { slot: moved.1 });
    out.extend_from_slice(&gens[level + 1..]);
    TangleWord::new(word.bottom().clone(), out).ok()
}

pub fn all_crossing_types() -> [CrossingType; 2] {
    [CrossingType::One, CrossingType::Two]
}
