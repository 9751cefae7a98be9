#![allow(dead_code)]

use fullpop::generate::{generate, GeneratorParams};
use fullpop::{parse_instance, Instance, Matching};

pub const DENSITIES: [f64; 3] = [0.3, 0.6, 1.0];

/// Parameters of the `i`-th sweep instance: sizes cycle through 1..=4 per side,
/// densities through [`DENSITIES`].
pub fn sweep_params(i: u64) -> GeneratorParams {
    GeneratorParams {
        agents: 1 + (i % 4) as usize,
        jobs: 1 + ((i / 4) % 4) as usize,
        density: DENSITIES[((i / 16) % 3) as usize],
        seed: 0x5eed_0000 + i,
    }
}

pub fn sweep_instance(i: u64) -> Instance {
    generate(&sweep_params(i)).expect("sweep parameters are feasible")
}

pub fn inst1() -> Instance {
    parse_instance("agents: a0 a1\njobs: b0 b1\na0 > b1\na1 > b1 b0\nb0 > a1\nb1 > a1 a0\n").unwrap()
}

/// Three agents with the same list; the job lists are an arbitrary fixed choice.
pub fn inst2() -> Instance {
    parse_instance(
        "agents: a1 a2 a3\njobs: b1 b2 b3\n\
         a1 > b1 b2 b3\na2 > b1 b2 b3\na3 > b1 b2 b3\n\
         b1 > a1 a2 a3\nb2 > a2 a3 a1\nb3 > a3 a1 a2\n",
    )
    .unwrap()
}

pub const INST3: &str = "\
agents: a a' p p' x x'
jobs: b b' q q' y y'
a > b q' b'
a' > b
p > q q'
p' > q q'
x > y y'
x' > y q'
b > a a'
b' > a
q > p p'
q' > p' a p x'
y > x x'
y' > x
";

pub fn inst3() -> Instance {
    parse_instance(INST3).unwrap()
}

pub fn named(g: &Instance, pairs: &[(&str, &str)]) -> Matching {
    Matching::from_names(g, pairs).unwrap()
}
