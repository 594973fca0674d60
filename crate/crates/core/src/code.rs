//! Linear codes over `F_q`, brute-force distance queries, and the angular
//! decoder.
//!
//! All queries enumerate the code, so they are guarded: a code may be
//! enumerated only when `q^k <= 2^20`.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::angle::{angle_fast, projectivize, ProjectivePoint};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::vec::FqVector;

/// Largest number of codewords any enumeration may visit.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// A code given by a full-rank `k x n` generator matrix.
#[derive(Debug, Clone)]
pub struct LinearCode {
    spec: Arc<FieldSpec>,
    generator: Vec<FqVector>,
    min_distance: OnceLock<usize>,
}

impl LinearCode {
    /// Builds the code spanned by `rows`, which must be linearly independent.
    pub fn new(spec: &Arc<FieldSpec>, rows: Vec<FqVector>) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyGenerator)?;
        if **first.spec() != **spec {
            return Err(Error::FieldMismatch {
                left: spec.order(),
                right: first.spec().order(),
            });
        }
        for row in &rows[1..] {
            first.check_compatible(row)?;
        }
        let rank = rank(spec, &rows);
        if rank < rows.len() {
            return Err(Error::RankDeficient {
                rank,
                rows: rows.len(),
            });
        }
        Ok(LinearCode {
            spec: Arc::clone(spec),
            generator: rows,
            min_distance: OnceLock::new(),
        })
    }

    /// Reed-Solomon code: evaluations of polynomials of degree `< k` at `n`
    /// distinct points. Row `i` of the generator is `(x_1^i, ..., x_n^i)`.
    /// Without explicit points the first `n` field elements are used.
    pub fn reed_solomon(
        spec: &Arc<FieldSpec>,
        n: usize,
        k: usize,
        points: Option<&[FieldElement]>,
    ) -> Result<Self> {
        let q = spec.order();
        if n as u64 > u64::from(q) {
            return Err(Error::TooManyPoints { n, q });
        }
        if k == 0 || k > n {
            return Err(Error::InvalidDimension { n, k });
        }
        let points: Vec<FieldElement> = match points {
            Some(pts) => {
                if pts.len() != n {
                    return Err(Error::LengthMismatch {
                        left: n,
                        right: pts.len(),
                    });
                }
                let mut sorted = pts.to_vec();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::DuplicatePoints);
                }
                for p in pts {
                    spec.element(u64::from(p.value()))?;
                }
                pts.to_vec()
            }
            None => spec.elements().take(n).collect(),
        };
        let rows = (0..k)
            .map(|i| {
                let coords = points.iter().map(|&x| spec.pow(x, i as u64)).collect();
                FqVector::from_parts(Arc::clone(spec), coords)
            })
            .collect();
        Self::new(spec, rows)
    }

    /// The `[n, 1, n]` repetition code.
    pub fn repetition(spec: &Arc<FieldSpec>, n: usize) -> Result<Self> {
        let row = FqVector::from_elements(spec, vec![FieldElement::ONE; n])?;
        Self::new(spec, vec![row])
    }

    /// Parses a generator matrix, one row per line in the vector text format.
    /// Blank lines are skipped.
    pub fn parse(spec: &Arc<FieldSpec>, text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| FqVector::parse(spec, l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, rows)
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn generator(&self) -> &[FqVector] {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.generator[0].len()
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    /// `message * G`.
    pub fn encode(&self, message: &[FieldElement]) -> Result<FqVector> {
        if message.len() != self.k() {
            return Err(Error::LengthMismatch {
                left: self.k(),
                right: message.len(),
            });
        }
        let spec = &*self.spec;
        let mut coords = vec![FieldElement::ZERO; self.n()];
        for (&m, row) in message.iter().zip(&self.generator) {
            if m.is_zero() {
                continue;
            }
            for (acc, &g) in coords.iter_mut().zip(row.coords()) {
                *acc = spec.add(*acc, spec.mul(m, g));
            }
        }
        Ok(FqVector::from_parts(Arc::clone(&self.spec), coords))
    }

    /// `q^k`, or [`Error::EnumerationTooLarge`] past the guard.
    pub fn codeword_count(&self) -> Result<u64> {
        let q = self.spec.order();
        u64::from(q)
            .checked_pow(self.k() as u32)
            .filter(|&c| c <= ENUMERATION_LIMIT)
            .ok_or(Error::EnumerationTooLarge { q, k: self.k() })
    }

    /// All `q^k` codewords, starting with zero, in lexicographic message order.
    pub fn codewords(&self) -> Result<Codewords<'_>> {
        let total = self.codeword_count()?;
        Ok(Codewords {
            code: self,
            message: vec![FieldElement::ZERO; self.k()],
            next: 0,
            total,
        })
    }

    /// Each of the `(q^k - 1)/(q - 1)` codeword directions once.
    ///
    /// Only messages whose first nonzero entry is 1 are encoded; the order is
    /// that of those messages in lexicographic order.
    pub fn projective_codewords(&self) -> Result<ProjectiveCodewords<'_>> {
        self.codeword_count()?;
        let k = self.k();
        Ok(ProjectiveCodewords {
            code: self,
            lead: Some(k - 1),
            tail_next: 0,
            tail_total: 1,
        })
    }

    /// Minimum weight of a nonzero codeword, computed once and cached.
    pub fn min_distance(&self) -> Result<usize> {
        if let Some(&d) = self.min_distance.get() {
            return Ok(d);
        }
        // Weight is scalar invariant, so one codeword per direction suffices.
        let d = self
            .projective_codewords()?
            .map(|p| p.rep().hamming_weight())
            .min()
            .expect("k >= 1 gives at least one direction");
        Ok(*self.min_distance.get_or_init(|| d))
    }

    /// Classical distance `min_{c in C} d_H(u, c)`, zero codeword included.
    pub fn dist_to_code(&self, u: &FqVector) -> Result<usize> {
        self.check_word(u)?;
        let mut best = usize::MAX;
        for c in self.codewords()? {
            best = best.min(u.hamming_distance(&c)?);
        }
        Ok(best)
    }

    /// `min_{c in C \ {0}} d_H(u, c)`, which equals the angle from `u` to the code.
    pub fn angle_to_code(&self, u: &FqVector) -> Result<usize> {
        self.check_word(u)?;
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut best = usize::MAX;
        for c in self.codewords()?.skip(1) {
            best = best.min(u.hamming_distance(&c)?);
        }
        Ok(best)
    }

    /// Finds the codeword direction closest in angle to `u`.
    ///
    /// Every direction is scanned. If the smallest angle `a` satisfies
    /// `2a < d` the direction is unique and returned as
    /// [`DecodeKind::UniqueDirection`]; a second direction inside that
    /// radius is reported as [`Error::UniquenessViolated`]. Otherwise all tied
    /// minimizers are returned as [`DecodeKind::BeyondRadius`].
    pub fn angular_decode(&self, u: &FqVector) -> Result<DecodeOutcome> {
        self.check_word(u)?;
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let d = self.min_distance()?;
        let mut best_angle = usize::MAX;
        let mut best = Vec::new();
        let mut within = 0;
        for point in self.projective_codewords()? {
            let angle = angle_fast(u, point.rep())?;
            if 2 * angle < d {
                within += 1;
            }
            if angle < best_angle {
                best_angle = angle;
                best.clear();
            }
            if angle == best_angle {
                best.push(Candidate { point, angle });
            }
        }

        let kind = if 2 * best_angle < d {
            if within != 1 || best.len() != 1 {
                return Err(Error::UniquenessViolated { count: within });
            }
            DecodeKind::UniqueDirection
        } else {
            DecodeKind::BeyondRadius
        };
        Ok(DecodeOutcome {
            kind,
            best,
            min_distance: d,
        })
    }

    /// All codeword directions at angle `< rho` from `u`, sorted by angle and
    /// then by enumeration order.
    pub fn projective_list_decode(&self, u: &FqVector, rho: usize) -> Result<Vec<Candidate>> {
        self.check_word(u)?;
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut list = Vec::new();
        for point in self.projective_codewords()? {
            let angle = angle_fast(u, point.rep())?;
            if angle < rho {
                list.push(Candidate { point, angle });
            }
        }
        list.sort_by_key(|c| c.angle);
        Ok(list)
    }

    fn check_word(&self, u: &FqVector) -> Result<()> {
        self.generator[0].check_compatible(u)
    }
}

/// Iterator over every codeword; see [`LinearCode::codewords`].
pub struct Codewords<'a> {
    code: &'a LinearCode,
    message: Vec<FieldElement>,
    next: u64,
    total: u64,
}

impl Iterator for Codewords<'_> {
    type Item = FqVector;

    fn next(&mut self) -> Option<FqVector> {
        if self.next >= self.total {
            return None;
        }
        let word = self.code.encode(&self.message).expect("message has length k");
        self.next += 1;
        increment(&mut self.message, self.code.spec.order());
        Some(word)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

/// Iterator over codeword directions; see [`LinearCode::projective_codewords`].
pub struct ProjectiveCodewords<'a> {
    code: &'a LinearCode,
    /// Position of the leading 1 in the current message block.
    lead: Option<usize>,
    tail_next: u64,
    tail_total: u64,
}

impl Iterator for ProjectiveCodewords<'_> {
    type Item = ProjectivePoint;

    fn next(&mut self) -> Option<ProjectivePoint> {
        let q = u64::from(self.code.spec.order());
        let k = self.code.k();
        loop {
            let lead = self.lead?;
            if self.tail_next < self.tail_total {
                let mut message = vec![FieldElement::ZERO; k];
                message[lead] = FieldElement::ONE;
                let mut idx = self.tail_next;
                for slot in message[lead + 1..].iter_mut().rev() {
                    *slot = FieldElement((idx % q) as u16);
                    idx /= q;
                }
                self.tail_next += 1;
                let word = self.code.encode(&message).expect("message has length k");
                return Some(projectivize(&word).expect("full rank: nonzero message gives nonzero word"));
            }
            self.lead = lead.checked_sub(1);
            self.tail_next = 0;
            self.tail_total = q.pow((k - lead) as u32);
        }
    }
}

fn increment(message: &mut [FieldElement], q: u32) {
    for slot in message.iter_mut().rev() {
        if slot.value() + 1 < q {
            slot.0 += 1;
            return;
        }
        *slot = FieldElement::ZERO;
    }
}

/// Row rank by Gaussian elimination.
fn rank(spec: &FieldSpec, rows: &[FqVector]) -> usize {
    let mut m: Vec<Vec<FieldElement>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = spec.inv(m[rank][col]).expect("pivot is nonzero");
        let pivot_row: Vec<_> = m[rank].iter().map(|&x| spec.mul(inv, x)).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = spec.sub(*x, spec.mul(factor, p));
            }
        }
        m[rank] = pivot_row;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// A codeword direction and its angle to the received word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub point: ProjectivePoint,
    pub angle: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecodeKind {
    UniqueDirection,
    BeyondRadius,
}

/// Result of [`LinearCode::angular_decode`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeOutcome {
    pub kind: DecodeKind,
    /// The unique direction, or every tied minimizer in enumeration order.
    pub best: Vec<Candidate>,
    /// The minimum distance `d`; the radius is `d / 2`.
    #[serde(rename = "d")]
    pub min_distance: usize,
}

impl DecodeOutcome {
    /// Angle from the input to the code.
    pub fn angle(&self) -> usize {
        self.best[0].angle
    }

    pub fn radius(&self) -> f64 {
        self.min_distance as f64 / 2.0
    }

    pub fn direction(&self) -> Option<&ProjectivePoint> {
        match self.kind {
            DecodeKind::UniqueDirection => Some(&self.best[0].point),
            DecodeKind::BeyondRadius => None,
        }
    }
}
