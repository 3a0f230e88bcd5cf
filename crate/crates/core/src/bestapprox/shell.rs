//! Exhaustive enumeration of norm shells in 128-bit fixed point, with the
//! constant term forced to the nearest integer (both choices when ambiguous).

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::sign_normalize;
use crate::real_enclosure::{abs_value, depth_schedule, AbsValue, LinearFormTarget};

/// Coordinates of a target on the `2^-bits` grid as 128-bit integers.
pub struct FixedCoords {
    pub bits: u32,
    pub lo: Vec<i128>,
    pub width: Vec<i128>,
}

/// Largest workable precision for vectors with `‖x̂‖ <= q`, if any.
pub fn fixed_coords(target: &LinearFormTarget, q: u64) -> Option<FixedCoords> {
    let mag: u64 = target
        .coords()
        .iter()
        .map(|c| c.approx_f64().abs().ceil() as u64 + 1)
        .sum();
    let used = 64 - q.leading_zeros() + 64 - mag.leading_zeros() + 3;
    let bits = 124i64 - used as i64;
    if bits < 24 {
        return None;
    }
    let bits = bits.min(100) as u32;
    let mut lo = Vec::new();
    let mut width = Vec::new();
    for c in target.coords() {
        let f = c.fixed(bits as u64);
        lo.push(f.lo.to_i128()?);
        width.push((&f.hi - &f.lo).to_i128()?);
    }
    Some(FixedCoords { bits, lo, width })
}

/// A shell vector `x̂` with a choice of constant term and its `|x·ξ*|` bounds in ulps.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub xhat: Vec<i64>,
    pub c: i64,
    pub lo: i128,
    pub hi: i128,
}

impl Candidate {
    pub fn vector(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.xhat.iter().map(|&x| BigInt::from(x)).collect();
        v.push(BigInt::from(self.c));
        v
    }
}

/// `x̂·ξ` lies in `[s - w, s + w]` ulps.
pub fn form_ulps(fc: &FixedCoords, xhat: &[i64]) -> (i128, i128) {
    let mut s: i128 = 0;
    let mut w: i128 = 0;
    for ((&x, &l), &wd) in xhat.iter().zip(&fc.lo).zip(&fc.width) {
        s += x as i128 * l;
        w += (x as i128).abs() * wd;
    }
    (s, w)
}

/// `|v|` bounds in ulps for `v` in `[vl, vh]`.
pub fn abs_bounds(vl: i128, vh: i128) -> (i128, i128) {
    if vl >= 0 {
        (vl, vh)
    } else if vh <= 0 {
        (-vh, -vl)
    } else {
        (0, vh.max(-vl))
    }
}

/// Nearest-integer candidates for `x̂` (usually two); dominated ones are dropped.
pub fn candidates_for(fc: &FixedCoords, xhat: &[i64], clamp: Option<i64>) -> Vec<Candidate> {
    let one: i128 = 1 << fc.bits;
    let (s, w) = form_ulps(fc, xhat);
    let (flo, fhi) = ((s - w) >> fc.bits, (s + w) >> fc.bits);
    let mut out: Vec<Candidate> = Vec::with_capacity(2);
    let mut f = flo;
    while f <= fhi {
        for c in [-f, -f - 1] {
            let c = match clamp {
                Some(m) => c.clamp(-(m as i128), m as i128),
                None => c,
            };
            if out.iter().any(|o| o.c as i128 == c) {
                continue;
            }
            let (lo, hi) = abs_bounds(s - w + c * one, s + w + c * one);
            out.push(Candidate {
                xhat: xhat.to_vec(),
                c: c as i64,
                lo,
                hi,
            });
        }
        f += 1;
    }
    let best = out.iter().map(|o| o.hi).min().expect("nonempty");
    out.retain(|o| o.lo <= best);
    out
}

/// Number of sign classes of `x̂ ∈ ℤ^n` with `‖x̂‖ = q`.
pub fn shell_size(n: usize, q: u64) -> Option<u64> {
    let a = (2 * q + 1).checked_pow(n as u32)?;
    let b = (2 * q - 1).checked_pow(n as u32)?;
    Some((a - b) / 2)
}

/// Decodes the `idx`-th representative of the shell `‖x̂‖ = q`: the first
/// coordinate of absolute value `q` equals `+q`.
pub fn shell_vector(n: usize, q: u64, mut idx: u64) -> Vec<i64> {
    let inner = 2 * q - 1;
    let outer = 2 * q + 1;
    let mut face = 0usize;
    loop {
        let cnt = inner.pow(face as u32) * outer.pow((n - 1 - face) as u32);
        if idx < cnt {
            break;
        }
        idx -= cnt;
        face += 1;
    }
    let mut x = vec![0i64; n];
    for j in (0..n).rev() {
        if j == face {
            x[j] = q as i64;
        } else if j > face {
            x[j] = (idx % outer) as i64 - q as i64;
            idx /= outer;
        } else {
            x[j] = (idx % inner) as i64 - (q as i64 - 1);
            idx /= inner;
        }
    }
    x
}

/// Number of representatives `x̂` with `‖x̂‖ <= q`, `x̂ ≠ 0`, up to sign.
pub fn cube_size(n: usize, q: u64) -> Option<u64> {
    Some(((2 * q + 1).checked_pow(n as u32)? - 1) / 2)
}

/// Decodes the `idx`-th nonzero `x̂` in the cube `‖x̂‖ <= q` up to sign
/// (the mixed-radix digits of `idx + 1 + half`).
pub fn cube_vector(n: usize, q: u64, idx: u64) -> Vec<i64> {
    let base = 2 * q + 1;
    let half = (base.pow(n as u32) - 1) / 2;
    let mut t = idx + 1 + half;
    let mut x = vec![0i64; n];
    for j in (0..n).rev() {
        x[j] = (t % base) as i64 - q as i64;
        t /= base;
    }
    x
}

/// Candidates of minimal possible value among `count` decoded vectors, pruned
/// against an optional bound `cut` (values certainly `>= cut` are dropped).
pub fn scan<F>(
    fc: &FixedCoords,
    count: u64,
    decode: F,
    clamp: Option<i64>,
    cut: Option<i128>,
) -> Vec<Candidate>
where
    F: Fn(u64) -> Vec<i64> + Sync,
{
    const CHUNK: u64 = 8192;
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<Vec<Candidate>> = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut best = cut.unwrap_or(i128::MAX);
            let mut local: Vec<Candidate> = Vec::new();
            let end = ((ch + 1) * CHUNK).min(count);
            for idx in ch * CHUNK..end {
                let x = decode(idx);
                for cand in candidates_for(fc, &x, clamp) {
                    if cand.lo > best || cut.is_some_and(|c| cand.lo >= c) {
                        continue;
                    }
                    if cand.hi < best {
                        best = cand.hi;
                        local.retain(|o| o.lo <= best);
                    }
                    local.push(cand);
                }
            }
            local
        })
        .collect();
    let best = parts
        .iter()
        .flatten()
        .map(|c| c.hi)
        .min()
        .unwrap_or(i128::MAX);
    parts
        .into_iter()
        .flatten()
        .filter(|c| c.lo <= best)
        .collect()
}

/// Certified argmin of `|x·ξ*|`; ties that refinement cannot split are errors.
pub fn certified_min(
    target: &LinearFormTarget,
    mut cands: Vec<Vec<BigInt>>,
    max_depth: u64,
) -> Result<(Vec<BigInt>, AbsValue)> {
    assert!(!cands.is_empty());
    for c in cands.iter_mut() {
        sign_normalize(c);
    }
    cands.sort();
    cands.dedup();
    let exact = target.exact_values().is_some();
    let depths = if exact {
        vec![0]
    } else {
        depth_schedule(max_depth)
    };
    for d in depths {
        let vals: Vec<AbsValue> = cands.iter().map(|q| abs_value(q, target, d)).collect();
        let m = (0..cands.len())
            .min_by(|&a, &b| {
                let (ea, eb) = (vals[a].to_enclosure(), vals[b].to_enclosure());
                ea.hi().cmp(eb.hi())
            })
            .expect("nonempty");
        let keep: Vec<usize> = (0..cands.len())
            .filter(|&i| i == m || !vals[m].below(&vals[i]))
            .collect();
        if keep.len() == 1 {
            return Ok((cands.swap_remove(m), vals[m].clone()));
        }
        let next: Vec<Vec<BigInt>> = keep.iter().map(|&i| cands[i].clone()).collect();
        cands = next;
    }
    Err(Error::exhausted(&cands[0], &cands[1]))
}

/// `|x·ξ*|` bounds of a record in the ulps of `fc`.
pub fn record_bounds(fc: &FixedCoords, q: &[BigInt]) -> Option<(i128, i128)> {
    let n = fc.lo.len();
    let xhat: Vec<i64> = q[..n].iter().map(|x| x.to_i64()).collect::<Option<_>>()?;
    let c = q[n].to_i64()? as i128;
    let (s, w) = form_ulps(fc, &xhat);
    let v = s + c * (1i128 << fc.bits);
    Some(abs_bounds(v - w, v + w))
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn restricted_norm(q: &[BigInt]) -> BigInt {
    q[..q.len() - 1]
        .iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_default()
}

pub fn full_norm(q: &[BigInt]) -> BigInt {
    q.iter().map(|x| x.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_partition_the_cube() {
        for n in 1..=3usize {
            let mut all = std::collections::BTreeSet::new();
            for q in 1..=3u64 {
                let sz = shell_size(n, q).unwrap();
                for i in 0..sz {
                    let x = shell_vector(n, q, i);
                    assert_eq!(x.iter().map(|v| v.unsigned_abs()).max().unwrap(), q);
                    let neg: Vec<i64> = x.iter().map(|v| -v).collect();
                    assert!(!all.contains(&neg));
                    assert!(all.insert(x));
                }
            }
            assert_eq!(all.len() as u64, cube_size(n, 3).unwrap());
            for i in 0..cube_size(n, 3).unwrap() {
                let x = cube_vector(n, 3, i);
                let neg: Vec<i64> = x.iter().map(|v| -v).collect();
                assert!(all.contains(&x) || all.contains(&neg));
            }
        }
    }
}
