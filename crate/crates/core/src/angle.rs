//! The Hamming angle `min_{c != 0} d_H(u, c v)` between nonzero vectors.
//!
//! Two algorithms compute it:
//!
//! - [`angle_naive`] evaluates the distance for every nonzero scalar, `O(q n)`.
//! - [`angle_fast`] makes one pass. Positions split into four classes by which
//!   of `u_i`, `v_i` vanish; where both are nonzero the ratio `u_i / v_i` is
//!   the only scalar that makes the position agree. With `N0` the number of
//!   doubly-zero positions and `A_c` the number of positions with ratio `c`,
//!   `d_H(u, c v) = n - N0 - A_c`, so the angle is `n - N0 - max_c A_c`.
//!
//! The angle is invariant under rescaling either argument, so it is also a
//! metric on projective points ([`ProjectivePoint`], [`projective_distance`]).

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::vec::FqVector;

/// Partition counts of the positions of a pair `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCensus {
    /// `u_i = 0` and `v_i = 0`.
    pub n0: usize,
    /// `u_i != 0` and `v_i = 0`.
    pub n1: usize,
    /// `u_i = 0` and `v_i != 0`.
    pub n2: usize,
    /// `(c, A_c)` for every ratio `c = u_i / v_i` that occurs, sorted by `c`.
    ratio_counts: Vec<(FieldElement, usize)>,
}

impl RatioCensus {
    pub fn ratio_counts(&self) -> &[(FieldElement, usize)] {
        &self.ratio_counts
    }

    /// `A_c`, zero for ratios that never occur.
    pub fn count(&self, c: FieldElement) -> usize {
        self.ratio_counts
            .binary_search_by_key(&c, |&(r, _)| r)
            .map_or(0, |i| self.ratio_counts[i].1)
    }

    pub fn max_agreement(&self) -> usize {
        self.ratio_counts.iter().map(|&(_, a)| a).max().unwrap_or(0)
    }

    /// Number of positions covered by the census.
    pub fn len(&self) -> usize {
        self.n0 + self.n1 + self.n2 + self.ratio_counts.iter().map(|&(_, a)| a).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn angle(&self) -> usize {
        self.len() - self.n0 - self.max_agreement()
    }
}

/// Per-thread ratio counters. Slot `log(u_i) - log(v_i) mod (q - 1)` holds
/// `A_c`; the three slots after `q - 2` count positions where `v_i`, `u_i` or
/// both vanish. All counters are zero between calls.
#[derive(Default)]
struct Scratch {
    counts: Vec<u32>,
    touched: Vec<u32>,
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::new(Scratch::default());
}

struct Tally {
    n0: usize,
    n1: usize,
    n2: usize,
    /// `max_c A_c`, zero when no position has both coordinates nonzero.
    best: usize,
    /// `(log c, A_c)` for every ratio that occurs; filled only on request.
    ratios: Vec<(u32, usize)>,
}

/// Counter slot of one position. `order` is `q - 1`.
#[inline(always)]
fn slot(log: &[u32], order: u32, a: FieldElement, b: FieldElement) -> usize {
    let (la, lb) = (log[a.0 as usize], log[b.0 as usize]);
    let diff = if la >= lb {
        la.wrapping_sub(lb)
    } else {
        la.wrapping_add(order).wrapping_sub(lb)
    };
    let class = (u32::from(a.is_zero()) << 1) | u32::from(b.is_zero());
    (if class == 0 { diff } else { order - 1 + class }) as usize
}

/// One pass over the pair.
///
/// When `n >= q - 1` the whole counter table is scanned and cleared afterwards,
/// which costs `O(q) = O(n)`. Shorter vectors record the ratio slots they touch
/// and clear only those.
fn tally(u: &FqVector, v: &FqVector, want_ratios: bool) -> Tally {
    let spec = u.spec();
    let order = spec.order() - 1;
    let ratio_slots = order as usize;
    let log = spec.log_table();
    let (uc, vc) = (u.coords(), v.coords());

    SCRATCH.with(|cell| {
        let mut scratch = cell.borrow_mut();
        let Scratch { counts, touched } = &mut *scratch;
        if counts.len() < ratio_slots + 3 {
            counts.resize(ratio_slots + 3, 0);
        }
        let counts = &mut counts[..ratio_slots + 3];
        let mut best = 0u32;
        let mut ratios = Vec::new();

        if uc.len() >= ratio_slots {
            for (&a, &b) in uc.iter().zip(vc) {
                counts[slot(log, order, a, b)] += 1;
            }
            for (i, &count) in counts[..ratio_slots].iter().enumerate() {
                best = best.max(count);
                if want_ratios && count > 0 {
                    ratios.push((i as u32, count as usize));
                }
            }
            counts[..ratio_slots].fill(0);
        } else {
            touched.clear();
            for (&a, &b) in uc.iter().zip(vc) {
                let i = slot(log, order, a, b);
                if i < ratio_slots && counts[i] == 0 {
                    touched.push(i as u32);
                }
                counts[i] += 1;
            }
            for &i in touched.iter() {
                let count = std::mem::take(&mut counts[i as usize]);
                best = best.max(count);
                if want_ratios {
                    ratios.push((i, count as usize));
                }
            }
        }
        let mut take = |i: usize| std::mem::take(&mut counts[ratio_slots + i]) as usize;
        Tally {
            n1: take(0),
            n2: take(1),
            n0: take(2),
            best: best as usize,
            ratios,
        }
    })
}

fn check_pair(u: &FqVector, v: &FqVector) -> Result<()> {
    u.check_compatible(v)?;
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// `d_H(u, c v)` for every nonzero scalar `c`, in encoding order of `c`.
pub fn scalar_distances(u: &FqVector, v: &FqVector) -> Result<Vec<(FieldElement, usize)>> {
    check_pair(u, v)?;
    let spec = u.spec();
    let n = u.len();
    // Memoizing c * x over the field is only worth it when the field is no
    // larger than the vectors.
    let use_row = spec.order() as usize <= n;
    let mut row = Vec::new();
    Ok(spec
        .nonzero_elements()
        .map(|c| {
            let dist = if use_row {
                row.clear();
                row.extend(spec.elements().map(|x| spec.mul(c, x)));
                u.coords()
                    .iter()
                    .zip(v.coords())
                    .filter(|&(a, b)| *a != row[b.0 as usize])
                    .count()
            } else {
                u.coords()
                    .iter()
                    .zip(v.coords())
                    .filter(|&(&a, &b)| a != spec.mul(c, b))
                    .count()
            };
            (c, dist)
        })
        .collect())
}

/// The Hamming angle by direct minimization over all `q - 1` scalars.
pub fn angle_naive(u: &FqVector, v: &FqVector) -> Result<usize> {
    Ok(scalar_distances(u, v)?
        .into_iter()
        .map(|(_, d)| d)
        .min()
        .expect("F_q has at least one nonzero element"))
}

/// Partition counts and per-ratio agreement counts of `(u, v)`.
pub fn build_census(u: &FqVector, v: &FqVector) -> Result<RatioCensus> {
    check_pair(u, v)?;
    let exp = u.spec().exp_table();
    let t = tally(u, v, true);
    let mut ratio_counts: Vec<_> = t
        .ratios
        .iter()
        .map(|&(slot, count)| (FieldElement(exp[slot as usize]), count))
        .collect();
    ratio_counts.sort_unstable();
    Ok(RatioCensus {
        n0: t.n0,
        n1: t.n1,
        n2: t.n2,
        ratio_counts,
    })
}

/// The Hamming angle in one pass over the coordinates.
pub fn angle_fast(u: &FqVector, v: &FqVector) -> Result<usize> {
    check_pair(u, v)?;
    let t = tally(u, v, false);
    Ok(u.len() - t.n0 - t.best)
}

/// A scalar `c` attaining the minimum of `d_H(u, c v)`, with the minimum.
///
/// Ties go to the smallest encoding. When no position has both coordinates
/// nonzero every scalar attains `n - N0` and `c = 1` is returned.
pub fn argmin_scalar(u: &FqVector, v: &FqVector) -> Result<(FieldElement, usize)> {
    check_pair(u, v)?;
    let exp = u.spec().exp_table();
    let t = tally(u, v, true);
    let c = t
        .ratios
        .iter()
        .filter(|&&(_, count)| count == t.best)
        .map(|&(slot, _)| FieldElement(exp[slot as usize]))
        .min()
        .unwrap_or(FieldElement::ONE);
    Ok((c, u.len() - t.n0 - t.best))
}

/// True iff at every position exactly one of `u_i`, `v_i` is zero, which is
/// exactly when the angle reaches its maximum `n`.
pub fn is_max_angle(u: &FqVector, v: &FqVector) -> Result<bool> {
    check_pair(u, v)?;
    Ok(u
        .coords()
        .iter()
        .zip(v.coords())
        .all(|(a, b)| a.is_zero() != b.is_zero()))
}

/// A point of `P(F_q^n)`: a nonzero vector whose first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    rep: FqVector,
}

impl ProjectivePoint {
    pub fn rep(&self) -> &FqVector {
        &self.rep
    }

    pub fn into_rep(self) -> FqVector {
        self.rep
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.rep.spec()
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn distance(&self, other: &ProjectivePoint) -> Result<usize> {
        projective_distance(self, other)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}", self.rep)
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rep.coords().serialize(s)
    }
}

/// Scales `u` so its first nonzero coordinate is 1.
pub fn projectivize(u: &FqVector) -> Result<ProjectivePoint> {
    let lead = *u
        .coords()
        .iter()
        .find(|c| !c.is_zero())
        .ok_or(Error::ZeroVector)?;
    let rep = if lead == FieldElement::ONE {
        u.clone()
    } else {
        u.scalar_mul(u.spec().inv(lead)?)
    };
    Ok(ProjectivePoint { rep })
}

/// The angle between two projective points.
pub fn projective_distance(a: &ProjectivePoint, b: &ProjectivePoint) -> Result<usize> {
    angle_fast(&a.rep, &b.rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec::nonzero_vectors;
    use rand::{Rng, SeedableRng};

    fn f(q: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::with_order(q).unwrap())
    }

    fn v(spec: &Arc<FieldSpec>, s: &str) -> FqVector {
        FqVector::parse(spec, s).unwrap()
    }

    fn fe(x: u16) -> FieldElement {
        FieldElement(x)
    }

    #[test]
    fn worked_example_in_f3_cubed() {
        let f3 = f(3);
        let (u, w) = (v(&f3, "1,2,0"), v(&f3, "1,1,2"));
        assert_eq!(scalar_distances(&u, &w).unwrap(), vec![(fe(1), 2), (fe(2), 2)]);
        assert_eq!(angle_naive(&u, &w).unwrap(), 2);
        assert_eq!(angle_fast(&u, &w).unwrap(), 2);
        assert_eq!(argmin_scalar(&u, &w).unwrap(), (fe(1), 2));
        assert!(!is_max_angle(&u, &w).unwrap());
    }

    #[test]
    fn census_examples() {
        let f3 = f(3);
        let c = build_census(&v(&f3, "1,2,0"), &v(&f3, "1,1,2")).unwrap();
        assert_eq!((c.n0, c.n1, c.n2), (0, 0, 1));
        assert_eq!(c.ratio_counts(), &[(fe(1), 1), (fe(2), 1)]);
        assert_eq!(c.len(), 3);
        assert_eq!(c.angle(), 2);

        let c = build_census(&v(&f3, "1,0"), &v(&f3, "0,1")).unwrap();
        assert_eq!((c.n0, c.n1, c.n2), (0, 1, 1));
        assert!(c.ratio_counts().is_empty());

        let u = v(&f3, "1,2,2,1");
        let c = build_census(&u, &u).unwrap();
        assert_eq!((c.n0, c.n1, c.n2), (0, 0, 0));
        assert_eq!(c.ratio_counts(), &[(fe(1), 4)]);
        assert_eq!(c.count(fe(2)), 0);
    }

    #[test]
    fn max_angle_examples() {
        let f3 = f(3);
        assert_eq!(angle_fast(&v(&f3, "1,0"), &v(&f3, "0,2")).unwrap(), 2);
        assert!(is_max_angle(&v(&f3, "1,0"), &v(&f3, "0,1")).unwrap());
        assert!(!is_max_angle(&v(&f3, "1,1"), &v(&f3, "1,0")).unwrap());
    }

    #[test]
    fn argmin_examples() {
        let f3 = f(3);
        let u = v(&f3, "1,2,0");
        assert_eq!(argmin_scalar(&u, &u.scalar_mul(fe(2))).unwrap(), (fe(2), 0));
        assert_eq!(argmin_scalar(&v(&f3, "1,0,0"), &v(&f3, "0,2,0")).unwrap(), (fe(1), 2));
        let f5 = f(5);
        assert_eq!(argmin_scalar(&v(&f5, "1,2"), &v(&f5, "2,4")).unwrap(), (fe(3), 0));
    }

    #[test]
    fn zero_and_mismatch_rejected() {
        let (f3, f5) = (f(3), f(5));
        let u = v(&f3, "1,2,0");
        let z = v(&f3, "0,0,0");
        for r in [angle_fast(&u, &z), angle_fast(&z, &u), angle_naive(&u, &z)] {
            assert_eq!(r, Err(Error::ZeroVector));
        }
        assert_eq!(argmin_scalar(&z, &u), Err(Error::ZeroVector));
        assert_eq!(is_max_angle(&u, &z), Err(Error::ZeroVector));
        assert!(build_census(&u, &z).is_err());
        assert_eq!(projectivize(&z).unwrap_err(), Error::ZeroVector);
        assert!(matches!(angle_fast(&u, &v(&f3, "1,2")), Err(Error::LengthMismatch { .. })));
        assert!(matches!(angle_fast(&u, &v(&f5, "1,2,0")), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn projectivize_examples() {
        let f3 = f(3);
        assert_eq!(projectivize(&v(&f3, "2,1,0")).unwrap().rep(), &v(&f3, "1,2,0"));
        assert_eq!(projectivize(&v(&f3, "1,2,2")).unwrap().rep(), &v(&f3, "1,2,2"));
        let f7 = f(7);
        assert_eq!(projectivize(&v(&f7, "0,0,5")).unwrap().rep(), &v(&f7, "0,0,1"));
    }

    #[test]
    fn projective_distance_ignores_representatives() {
        let f3 = f(3);
        let (u, w) = (v(&f3, "1,2,0"), v(&f3, "1,1,2"));
        let (a, b) = (projectivize(&u).unwrap(), projectivize(&w).unwrap());
        assert_eq!(projective_distance(&a, &b).unwrap(), 2);
        assert_eq!(a.distance(&a).unwrap(), 0);
        for alpha in f3.nonzero_elements() {
            for beta in f3.nonzero_elements() {
                let pa = projectivize(&u.scalar_mul(alpha)).unwrap();
                let pb = projectivize(&w.scalar_mul(beta)).unwrap();
                assert_eq!((&pa, &pb), (&a, &b));
                assert_eq!(projective_distance(&pa, &pb).unwrap(), 2);
                assert_eq!(angle_fast(&u.scalar_mul(alpha), &w.scalar_mul(beta)).unwrap(), 2);
            }
        }
    }

    #[test]
    fn fast_matches_naive_exhaustive_small() {
        for (q, n) in [(3, 3), (4, 2), (2, 4), (5, 2)] {
            let fq = f(q);
            let all: Vec<_> = nonzero_vectors(&fq, n).collect();
            for a in &all {
                for b in &all {
                    let naive = angle_naive(a, b).unwrap();
                    assert_eq!(angle_fast(a, b).unwrap(), naive, "{a:?} {b:?}");
                    assert_eq!(build_census(a, b).unwrap().angle(), naive);
                    let (c, ang) = argmin_scalar(a, b).unwrap();
                    assert_eq!(ang, naive);
                    let dists = scalar_distances(a, b).unwrap();
                    let first_min = dists.iter().find(|&&(_, d)| d == naive).unwrap().0;
                    assert_eq!(c, first_min, "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn fast_matches_naive_random_pairs() {
        let f7 = f(7);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 1000 {
            let a: Vec<u64> = (0..20).map(|_| rng.gen_range(0..7)).collect();
            let b: Vec<u64> = (0..20).map(|_| rng.gen_range(0..7)).collect();
            let (a, b) = (FqVector::new(&f7, &a).unwrap(), FqVector::new(&f7, &b).unwrap());
            if a.is_zero() || b.is_zero() {
                continue;
            }
            assert_eq!(angle_fast(&a, &b).unwrap(), angle_naive(&a, &b).unwrap());
            checked += 1;
        }
    }

    #[test]
    fn scratch_survives_field_changes() {
        // A large field followed by a small one must not leak stale counts.
        let big = f(251);
        let u = FqVector::new(&big, &[250, 3, 7]).unwrap();
        assert_eq!(angle_fast(&u, &u).unwrap(), 0);
        let f3 = f(3);
        assert_eq!(angle_fast(&v(&f3, "1,2,0"), &v(&f3, "1,1,2")).unwrap(), 2);
        assert_eq!(angle_fast(&u, &u.scalar_mul(fe(9))).unwrap(), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn nonzero_vec(q: u32, n: usize) -> impl Strategy<Value = Vec<u64>> {
            proptest::collection::vec(0..u64::from(q), n)
                .prop_filter("nonzero", |xs| xs.iter().any(|&x| x != 0))
        }

        fn field_and_pair() -> impl Strategy<Value = (u32, Vec<u64>, Vec<u64>, u64, u64)> {
            prop_oneof![Just(3u32), Just(8), Just(9), Just(16), Just(25), Just(251)].prop_flat_map(|q| {
                (1usize..40).prop_flat_map(move |n| {
                    (Just(q), nonzero_vec(q, n), nonzero_vec(q, n), 1..u64::from(q), 1..u64::from(q))
                })
            })
        }

        proptest! {
            #[test]
            fn bi_scalar_invariance_and_range((q, a, b, alpha, beta) in field_and_pair()) {
                let fq = f(q);
                let (a, b) = (FqVector::new(&fq, &a).unwrap(), FqVector::new(&fq, &b).unwrap());
                let (alpha, beta) = (fq.element(alpha).unwrap(), fq.element(beta).unwrap());
                let ang = angle_fast(&a, &b).unwrap();
                prop_assert_eq!(ang, angle_naive(&a, &b).unwrap());
                prop_assert_eq!(ang, angle_fast(&a.scalar_mul(alpha), &b.scalar_mul(beta)).unwrap());
                prop_assert_eq!(ang, angle_fast(&b, &a).unwrap());
                prop_assert!(ang <= a.len());
                prop_assert!(ang <= a.hamming_distance(&b).unwrap());
                let shared = a.coords().iter().zip(b.coords()).any(|(x, y)| !x.is_zero() && !y.is_zero());
                if shared {
                    prop_assert!(ang < a.len());
                }
                prop_assert_eq!(is_max_angle(&a, &b).unwrap(), ang == a.len());
            }
        }
    }
}
