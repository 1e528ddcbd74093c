#![allow(dead_code)]

use charquo::{Mat2, PrimeField, ProjMat2, Quad};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sl2(f: &PrimeField, rng: &mut impl Rng) -> Mat2 {
    let p = f.modulus() as u32;
    loop {
        let a = rng.gen_range(0..p);
        let b = rng.gen_range(0..p);
        let c = rng.gen_range(0..p);
        if a != 0 {
            let d = f.mul(f.add(1, f.mul(b, c)), f.inv(a).unwrap());
            return Mat2([a, b, c, d]);
        }
    }
}

pub fn random_psl2(f: &PrimeField, rng: &mut impl Rng) -> ProjMat2 {
    f.proj(random_sl2(f, rng))
}

pub fn random_quad(f: &PrimeField, rng: &mut impl Rng) -> Quad<ProjMat2> {
    Quad::new(
        random_psl2(f, rng),
        random_psl2(f, rng),
        random_psl2(f, rng),
        random_psl2(f, rng),
    )
}

pub fn random_sl2_quad(f: &PrimeField, rng: &mut impl Rng) -> Quad<Mat2> {
    Quad::new(
        random_sl2(f, rng),
        random_sl2(f, rng),
        random_sl2(f, rng),
        random_sl2(f, rng),
    )
}
