#![allow(dead_code)]

use heunlab_core::heun::HeunParams;
use heunlab_core::Rational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// `a = 2, q = 1, α = β = γ = δ = 1`.
pub fn sample() -> HeunParams<Rational> {
    HeunParams::new(q(2, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 1)).unwrap()
}

pub const A_CHOICES: [(i64, i64); 8] = [(1, 2), (-1, 2), (2, 1), (-2, 1), (3, 1), (-3, 1), (1, 3), (5, 2)];

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// Random rational Heun parameters with `γ` off the nonpositive integers.
pub fn random_params(rng: &mut ChaCha8Rng) -> HeunParams<Rational> {
    let (an, ad) = A_CHOICES[rng.gen_range(0..A_CHOICES.len())];
    let gamma = loop {
        let g = small_rational(rng);
        if !(g.is_integer() && g <= q(0, 1)) {
            break g;
        }
    };
    HeunParams::new(
        q(an, ad),
        small_rational(rng),
        small_rational(rng),
        small_rational(rng),
        gamma,
        small_rational(rng),
    )
    .unwrap()
}

/// `0`, plus `1 − γ` when it is a distinct exponent without poles.
pub fn admissible_lambdas(p: &HeunParams<Rational>) -> Vec<Rational> {
    let mut out = vec![q(0, 1)];
    let second = q(1, 1) - &p.gamma;
    if !second.is_integer() {
        out.push(second);
    }
    out
}
