//! Small deterministic PRNG used for instance generation and sampling.
//!
//! xoshiro256++ seeded through SplitMix64. Integer-only state transitions
//! and a fixed 53-bit mantissa construction for uniform reals keep streams
//! bit-identical across platforms.

/// xoshiro256++ generator with SplitMix64 seeding.
#[derive(Debug, Clone)]
pub struct Rng {
    state: [u64; 4],
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let mut next = || {
            sm = sm.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        Rng {
            state: [next(), next(), next(), next()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in the open interval (0, 1): 53-bit mantissa plus half an ulp.
    pub fn uniform_01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in the open interval (-1, 1).
    pub fn uniform_sym(&mut self) -> f64 {
        2.0 * self.uniform_01() - 1.0
    }

    /// Uniform in (lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform_01()
    }

    /// A point on the unit p-sphere: a symmetric cube sample pushed onto the
    /// sphere. The distribution is irrelevant for soundness checks; coverage
    /// of all sign patterns and directions is what matters.
    pub fn sphere_point(&mut self, n: usize, p: f64) -> Vec<f64> {
        loop {
            let x: Vec<f64> = (0..n).map(|_| self.uniform_sym()).collect();
            let norm = p_norm(&x, p);
            if norm > 1e-3 {
                return x.iter().map(|v| v / norm).collect();
            }
        }
    }
}

/// The p-norm for p in [1, inf); callers pass even integer p as f64.
pub fn p_norm(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn uniform_sym_is_strictly_inside() {
        let mut r = Rng::new(7);
        for _ in 0..10_000 {
            let v = r.uniform_sym();
            assert!(v > -1.0 && v < 1.0);
        }
    }

    #[test]
    fn sphere_point_has_unit_norm() {
        let mut r = Rng::new(3);
        for _ in 0..100 {
            let x = r.sphere_point(3, 6.0);
            assert!((p_norm(&x, 6.0) - 1.0).abs() < 1e-12);
        }
    }
}
