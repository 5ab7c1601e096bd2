//! Seedable random numbers for noise synthesis.
//!
//! Noise must be reproducible across runs, machines, and reimplementations
//! in other languages, so the generator is spelled out here rather than
//! delegated to a library whose stream might change between versions.
//!
//! The generator is PCG-XSH-RR 64/32 with the reference seeding procedure:
//!
//! ```text
//! state = 0; inc = (stream << 1) | 1
//! step(); state += seed; step()
//! step(): out = rotr32(((state >> 18) ^ state) >> 27, state >> 59)
//!         state = state * 6364136223846793005 + inc   (mod 2^64)
//! ```
//!
//! Uniform doubles are `(u32 + 0.5) / 2^32`, always in the open interval
//! (0, 1). Gaussians use the Box-Muller cosine branch and consume exactly
//! two uniforms each, so independently seeded streams stay aligned no
//! matter how callers interleave draws.

/// PCG-XSH-RR 64/32 generator.
#[derive(Debug, Clone)]
pub struct Pcg32 {
    state: u64,
    inc: u64,
}

const PCG_MULT: u64 = 6364136223846793005;

impl Pcg32 {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = Pcg32 {
            state: 0,
            inc: (stream << 1) | 1,
        };
        rng.next_u32();
        rng.state = rng.state.wrapping_add(seed);
        rng.next_u32();
        rng
    }

    pub fn next_u32(&mut self) -> u32 {
        let old = self.state;
        self.state = old.wrapping_mul(PCG_MULT).wrapping_add(self.inc);
        let xorshifted = (((old >> 18) ^ old) >> 27) as u32;
        let rot = (old >> 59) as u32;
        xorshifted.rotate_right(rot)
    }

    /// Uniform double in the open interval (0, 1).
    pub fn next_unit_open(&mut self) -> f64 {
        (f64::from(self.next_u32()) + 0.5) / 4294967296.0
    }

    /// Standard normal deviate (Box-Muller, cosine branch).
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_unit_open();
        let u2 = self.next_unit_open();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_reference_stream() {
        // First outputs of the canonical PCG32 demo seeding (seed 42, stream 54).
        let mut rng = Pcg32::new(42, 54);
        let got: Vec<u32> = (0..6).map(|_| rng.next_u32()).collect();
        assert_eq!(
            got,
            vec![0xa15c_02b7, 0x7b47_f409, 0xba1d_3330, 0x83d2_f293, 0xbfa4_784b, 0xcbed_606e]
        );
    }

    #[test]
    fn seeding_is_deterministic() {
        let mut a = Pcg32::new(1, 1);
        let mut b = Pcg32::new(1, 1);
        for _ in 0..100 {
            assert_eq!(a.next_u32(), b.next_u32());
        }
        let mut r = Pcg32::new(1, 1);
        let got: Vec<u32> = (0..4).map(|_| r.next_u32()).collect();
        assert_eq!(got, vec![3380776849, 361947764, 3223725655, 2781001427]);
    }

    #[test]
    fn distinct_seeds_give_distinct_streams() {
        let a: Vec<u32> = {
            let mut r = Pcg32::new(5, 1);
            (0..8).map(|_| r.next_u32()).collect()
        };
        let b: Vec<u32> = {
            let mut r = Pcg32::new(6, 1);
            (0..8).map(|_| r.next_u32()).collect()
        };
        assert_ne!(a, b);
    }

    #[test]
    fn uniform_stays_in_open_interval() {
        let mut rng = Pcg32::new(99, 1);
        for _ in 0..10_000 {
            let u = rng.next_unit_open();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn gaussian_matches_independent_oracle() {
        // Frozen from a bit-exact integer-arithmetic reimplementation of the
        // generator and the Box-Muller recipe documented in the module docs.
        let mut rng = Pcg32::new(7, 1);
        let expect = [
            1.0305643901542287,
            1.241527593808371,
            -1.1204366917934814,
            -1.0851957772712308,
        ];
        for e in expect {
            assert_eq!(rng.next_gaussian(), e);
        }
    }

    #[test]
    fn gaussian_moments_are_sane() {
        let mut rng = Pcg32::new(123, 1);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }
}
