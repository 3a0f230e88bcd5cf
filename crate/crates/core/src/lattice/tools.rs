//! Sublattice questions about best-approximation data: spans, membership,
//! primitivity of planes, tail dimensions, plane covers and normalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hnf::{hermite_rows, rank, solve_in_span};
use crate::error::{Error, Result};
use crate::numeric::{gcd_all, serde_bigint, serde_bigint_mat, Rational};

/// Integer vectors spanning a sublattice of `ℤ^{dim_ambient}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub dim_ambient: usize,
    #[serde(with = "serde_bigint_mat")]
    pub vectors: Vec<Vec<BigInt>>,
    pub rank: usize,
}

impl LatticeBasis {
    pub fn new(vectors: Vec<Vec<BigInt>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::InvalidArgument("empty vector list".into()));
        };
        let d = first.len();
        if vectors.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidArgument(
                "vectors of different lengths".into(),
            ));
        }
        let r = rank(&vectors);
        Ok(LatticeBasis {
            dim_ambient: d,
            vectors,
            rank: r,
        })
    }

    /// `⟨e_i, e_{n+1}⟩` in `ℤ^{n+1}`, `i` one-based.
    pub fn h(i: usize, n: usize) -> Self {
        assert!(1 <= i && i <= n);
        LatticeBasis::coordinate(&[i - 1, n], n + 1)
    }

    /// `⟨e_1, ..., e_k, e_{n+1}⟩` in `ℤ^{n+1}`.
    pub fn l_nk(n: usize, k: usize) -> Self {
        let mut idx: Vec<usize> = (0..k).collect();
        idx.push(n);
        LatticeBasis::coordinate(&idx, n + 1)
    }

    /// Span of the listed (zero-based) unit vectors.
    pub fn coordinate(idx: &[usize], dim: usize) -> Self {
        let vectors = idx
            .iter()
            .map(|&i| {
                let mut v = vec![BigInt::zero(); dim];
                v[i] = BigInt::one();
                v
            })
            .collect();
        LatticeBasis::new(vectors).expect("nonempty")
    }

    /// A ℤ-basis (Hermite form) of the same lattice.
    pub fn hermite(&self) -> LatticeBasis {
        let h = hermite_rows(&self.vectors);
        LatticeBasis {
            dim_ambient: self.dim_ambient,
            rank: h.len(),
            vectors: h,
        }
    }

    pub fn contains(&self, q: &[BigInt]) -> bool {
        sublattice_membership(q, self)
    }
}

/// Exact rank of a nonempty list of integer vectors.
pub fn span_dimension(vectors: &[Vec<BigInt>]) -> Result<usize> {
    if vectors.is_empty() {
        return Err(Error::InvalidArgument(
            "span_dimension needs a nonempty list".into(),
        ));
    }
    Ok(rank(vectors))
}

/// Whether `q` is an integer combination of the basis vectors.
pub fn sublattice_membership(q: &[BigInt], l: &LatticeBasis) -> bool {
    if q.len() != l.dim_ambient {
        return false;
    }
    let h = hermite_rows(&l.vectors);
    solve_in_span(&h, q).is_some()
}

/// All 2×2 minors of the matrix with columns `u`, `v`.
pub fn two_minors(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::new();
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            out.push(&u[i] * &v[j] - &u[j] * &v[i]);
        }
    }
    out
}

/// Whether `⟨u,v⟩_ℝ ∩ ℤ^d = ⟨u,v⟩_ℤ`, i.e. the 2×2 minors are coprime.
pub fn primitive_pair_check(u: &[BigInt], v: &[BigInt]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::InvalidArgument(
            "vectors of different lengths".into(),
        ));
    }
    let minors = two_minors(u, v);
    let g = gcd_all(&minors);
    if g.is_zero() {
        return Err(Error::Degenerate);
    }
    Ok(g.is_one())
}

/// Searches `g u + h v ∈ ℤ^d` with `g, h ∈ [0,1)` of denominator at most
/// `max_den`, not both zero. Returns the first such pair.
pub fn fractional_combination_counterexample(
    u: &[BigInt],
    v: &[BigInt],
    max_den: u64,
) -> Option<(Rational, Rational)> {
    for den in 2..=max_den {
        let d = BigInt::from(den);
        let ur: Vec<u64> = u.iter().map(|x| residue(x, &d)).collect();
        let vr: Vec<u64> = v.iter().map(|x| residue(x, &d)).collect();
        for a in 0..den {
            for b in 0..den {
                if a == 0 && b == 0 {
                    continue;
                }
                if ur.iter().zip(&vr).all(|(x, y)| (a * x + b * y) % den == 0) {
                    return Some((
                        Rational::new(BigInt::from(a), d.clone()),
                        Rational::new(BigInt::from(b), d.clone()),
                    ));
                }
            }
        }
    }
    None
}

fn residue(x: &BigInt, d: &BigInt) -> u64 {
    let r = x.mod_floor(d);
    r.try_into().expect("small residue")
}

/// Tail-dimension estimate of a best-approximation sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RFinding {
    /// One-based index of the earliest suffix realizing `spanned_dim`.
    pub tail_start: usize,
    pub spanned_dim: usize,
    pub basis_witness: LatticeBasis,
    pub stable: bool,
    /// Rank of `{q_j : j >= j0}` for `j0 = 1..=window`.
    pub suffix_ranks: Vec<usize>,
}

/// Ranks of the suffixes `{q_j : j >= j0}`, `j0 = 1..=window`.
pub fn r_estimate(records: &[Vec<BigInt>], window: usize) -> Result<RFinding> {
    if window == 0 || records.len() < window + 3 {
        return Err(Error::InsufficientData(format!(
            "{} records for window {}",
            records.len(),
            window
        )));
    }
    let ranks: Vec<usize> = (0..window).map(|j0| rank(&records[j0..])).collect();
    let spanned = ranks[window - 1];
    let start = ranks.iter().position(|&r| r == spanned).expect("present");
    let tail = window.div_ceil(2).max(2).min(window);
    let stable = ranks[window - tail..].iter().all(|&r| r == spanned);
    let basis = LatticeBasis::new(records[start..].to_vec())?.hermite();
    Ok(RFinding {
        tail_start: start + 1,
        spanned_dim: spanned,
        basis_witness: basis,
        stable,
        suffix_ranks: ranks,
    })
}

/// A 2-plane spanned by two tail vectors that carries a whole suffix of the tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneSuffix {
    pub pair: (usize, usize),
    pub suffix_start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    /// Smallest number of candidates covering the tail; `None` is NO_COVER.
    pub min_cover: Option<usize>,
    pub chosen: Vec<usize>,
    /// Generated plane containing a suffix of at least three tail vectors.
    pub single_plane: Option<PlaneSuffix>,
}

pub const MAX_COVER_CANDIDATES: usize = 12;

/// Smallest sub-family of rank-2 candidates whose union contains the tail.
pub fn min_two_plane_cover(
    tail: &[Vec<BigInt>],
    candidates: &[LatticeBasis],
) -> Result<CoverReport> {
    if tail.is_empty() {
        return Err(Error::InvalidArgument("empty tail".into()));
    }
    if candidates.len() > MAX_COVER_CANDIDATES {
        return Err(Error::RangeTooLarge(format!(
            "{} candidates (cap {MAX_COVER_CANDIDATES})",
            candidates.len()
        )));
    }
    if let Some(c) = candidates.iter().find(|c| c.rank != 2) {
        return Err(Error::RankMismatch {
            expected: 2,
            found: c.rank,
        });
    }
    let hs: Vec<Vec<Vec<BigInt>>> = candidates
        .iter()
        .map(|c| hermite_rows(&c.vectors))
        .collect();
    // bitmask of candidates containing each tail vector
    let masks: Vec<u32> = tail
        .iter()
        .map(|q| {
            hs.iter()
                .enumerate()
                .filter(|(_, h)| {
                    q.len() == candidates[0].dim_ambient && solve_in_span(h, q).is_some()
                })
                .fold(0u32, |m, (i, _)| m | (1 << i))
        })
        .collect();
    let mut best: Option<(usize, u32)> = None;
    for set in 0u32..(1u32 << candidates.len()) {
        let size = set.count_ones() as usize;
        if best.is_some_and(|(b, _)| b <= size) {
            continue;
        }
        if masks.iter().all(|m| m & set != 0) {
            best = Some((size, set));
        }
    }
    let single_plane = plane_with_suffix(tail);
    Ok(match best {
        None => CoverReport {
            min_cover: None,
            chosen: Vec::new(),
            single_plane,
        },
        Some((size, set)) => CoverReport {
            min_cover: Some(size),
            chosen: (0..candidates.len())
                .filter(|i| set & (1 << i) != 0)
                .collect(),
            single_plane,
        },
    })
}

fn plane_with_suffix(tail: &[Vec<BigInt>]) -> Option<PlaneSuffix> {
    let m = tail.len();
    for i in 0..m {
        for j in (i + 1)..m {
            if rank(&[tail[i].clone(), tail[j].clone()]) < 2 {
                continue;
            }
            let inside =
                |q: &Vec<BigInt>| rank(&[tail[i].clone(), tail[j].clone(), q.clone()]) == 2;
            let mut s = m;
            while s > 0 && inside(&tail[s - 1]) {
                s -= 1;
            }
            if m - s >= 3 {
                return Some(PlaneSuffix {
                    pair: (i, j),
                    suffix_start: s,
                });
            }
        }
    }
    None
}

/// Integer matrix mapping a rank-3 lattice into `⟨e_1, e_2, e_{n+1}⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    #[serde(with = "serde_bigint_mat")]
    pub matrix: Vec<Vec<BigInt>>,
    #[serde(with = "serde_bigint")]
    pub d: BigInt,
    /// The ℤ-basis `u_1, u_2, u_3` of `L` that is sent to `d e_1, d e_2, d e_{n+1}`.
    #[serde(with = "serde_bigint_mat")]
    pub basis: Vec<Vec<BigInt>>,
}

pub fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Completes a ℤ-basis of `L` by unit vectors, inverts, and clears denominators.
pub fn normalizing_automorphism(l: &LatticeBasis) -> Result<Normalization> {
    if l.rank != 3 {
        return Err(Error::RankMismatch {
            expected: 3,
            found: l.rank,
        });
    }
    let dim = l.dim_ambient;
    let basis = hermite_rows(&l.vectors);
    let mut cols = basis.clone();
    let mut extra = Vec::new();
    for i in 0..dim {
        if cols.len() == dim {
            break;
        }
        let mut e = vec![BigInt::zero(); dim];
        e[i] = BigInt::one();
        let mut trial = cols.clone();
        trial.push(e.clone());
        if rank(&trial) == trial.len() {
            cols = trial;
            extra.push(e);
        }
    }
    // M has the chosen vectors as columns; A = d · T · M^{-1}
    let m: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| Rational::from_integer(cols[c][r].clone()))
                .collect()
        })
        .collect();
    let inv = invert(m).ok_or(Error::Degenerate)?;
    let n = dim - 1;
    let mut targets = vec![0usize, 1, n];
    targets.extend(2..n);
    // row targets[c] of T·M^{-1} is row c of M^{-1}
    let mut a = vec![vec![Rational::zero(); dim]; dim];
    for (c, &t) in targets.iter().enumerate() {
        a[t] = inv[c].clone();
    }
    let d = a
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let matrix: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| (x * Rational::from_integer(d.clone())).to_integer())
                .collect()
        })
        .collect();
    Ok(Normalization { matrix, d, basis })
}

fn invert(mut m: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        inv.swap(c, p);
        let piv = m[c][c].clone();
        for j in 0..n {
            m[c][j] = &m[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for j in 0..n {
                let a = &m[c][j] * &f;
                m[r][j] -= a;
                let b = &inv[c][j] * &f;
                inv[r][j] -= b;
            }
        }
    }
    Some(inv)
}

/// Whether every coordinate outside `keep` (zero-based) vanishes.
pub fn supported_on(q: &[BigInt], keep: &[usize]) -> bool {
    q.iter()
        .enumerate()
        .all(|(i, x)| keep.contains(&i) || x.is_zero())
}

/// One-based index `i` with `q ∈ H_i` (support in `{i, n+1}` and `q_i ≠ 0`), if unique.
pub fn h_membership(q: &[BigInt]) -> Vec<usize> {
    let n = q.len() - 1;
    (0..n)
        .filter(|&i| !q[i].is_zero() && supported_on(q, &[i, n]))
        .map(|i| i + 1)
        .collect()
}

pub fn abs_max(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}
