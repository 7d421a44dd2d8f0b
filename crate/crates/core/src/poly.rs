//! Dense univariate polynomials as coefficient vectors (constant term first).

use crate::field::FieldContext;

/// Product of two coefficient vectors; the result has length `a.len() + b.len() - 1`.
pub fn mul(ctx: &FieldContext, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = ctx.modulus() as u64;
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    let bound = u64::MAX / ((p - 1) * (p - 1)).max(1);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (slot, &y) in acc[i..].iter_mut().zip(b) {
            *slot += x as u64 * y as u64;
        }
        if (i as u64 + 1).is_multiple_of(bound) {
            acc.iter_mut().for_each(|v| *v %= p);
        }
    }
    acc.into_iter().map(|v| ctx.reduce(v)).collect()
}

/// Horner evaluation.
pub fn eval(ctx: &FieldContext, f: &[u32], t: u32) -> u32 {
    f.iter().rev().fold(0, |acc, &c| ctx.add(ctx.mul(acc, t), c))
}

/// Formal derivative.
pub fn derivative(ctx: &FieldContext, f: &[u32]) -> Vec<u32> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| ctx.mul(c, ctx.from_i64(k as i64)))
        .collect()
}

/// Monic polynomial with the given roots.
pub fn from_roots(ctx: &FieldContext, roots: &[u32]) -> Vec<u32> {
    roots.iter().fold(vec![1], |acc, &r| mul(ctx, &acc, &[ctx.neg(r), 1]))
}

/// Zero-pad `f` to length `len`; panics if `f` has a nonzero coefficient past `len`.
pub fn padded(f: &[u32], len: usize) -> Vec<u32> {
    assert!(f.iter().skip(len).all(|&c| c == 0), "polynomial exceeds degree bound");
    let mut out = f[..f.len().min(len)].to_vec();
    out.resize(len, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn horner_matches_power_sum() {
        let ctx = FieldContext::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f: Vec<u32> = (0..11).map(|_| rng.gen_range(0..10007)).collect();
            let t = rng.gen_range(0..10007);
            let naive = f.iter().enumerate().fold(0, |acc, (k, &c)| {
                ctx.add(acc, ctx.mul(c, ctx.pow(t, k as u64)))
            });
            assert_eq!(eval(&ctx, &f, t), naive);
        }
    }

    #[test]
    fn product_evaluates_pointwise() {
        let ctx = FieldContext::new(101).unwrap();
        let a = vec![3, 0, 5, 1];
        let b = vec![7, 100, 2];
        let c = mul(&ctx, &a, &b);
        assert_eq!(c.len(), 6);
        for t in 0..101 {
            assert_eq!(eval(&ctx, &c, t), ctx.mul(eval(&ctx, &a, t), eval(&ctx, &b, t)));
        }
    }

    #[test]
    fn roots_and_derivative() {
        let ctx = FieldContext::new(101).unwrap();
        let d = from_roots(&ctx, &[1, 2, 3]);
        assert_eq!(d, vec![ctx.neg(6), 11, ctx.neg(6), 1]);
        // D'(1) = (1-2)(1-3) = 2
        assert_eq!(eval(&ctx, &derivative(&ctx, &d), 1), 2);
    }
}
