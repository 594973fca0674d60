//! Vectors over `F_q` and the Hamming primitives.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// A length-`n` vector over `F_q`, `n >= 1`.
#[derive(Clone)]
pub struct FqVector {
    spec: Arc<FieldSpec>,
    coords: Vec<FieldElement>,
}

impl FqVector {
    /// Builds a vector from integer encodings, validating each one.
    pub fn new(spec: &Arc<FieldSpec>, values: &[u64]) -> Result<Self> {
        let coords = values
            .iter()
            .map(|&v| spec.element(v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(spec, coords)
    }

    pub fn from_elements(spec: &Arc<FieldSpec>, coords: Vec<FieldElement>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(bad) = coords.iter().find(|c| c.value() >= spec.order()) {
            return Err(Error::InvalidElement {
                value: u64::from(bad.value()),
                q: spec.order(),
            });
        }
        Ok(FqVector {
            spec: Arc::clone(spec),
            coords,
        })
    }

    pub(crate) fn from_parts(spec: Arc<FieldSpec>, coords: Vec<FieldElement>) -> Self {
        debug_assert!(!coords.is_empty());
        FqVector { spec, coords }
    }

    pub fn zeros(spec: &Arc<FieldSpec>, n: usize) -> Result<Self> {
        Self::from_elements(spec, vec![FieldElement::ZERO; n])
    }

    /// Parses the comma-separated text form, e.g. `1,2,0`. Whitespace is ignored.
    pub fn parse(spec: &Arc<FieldSpec>, text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|tok| {
                let tok: String = tok.chars().filter(|c| !c.is_whitespace()).collect();
                tok.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("invalid coordinate {tok:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, &values)
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    /// Always false; vectors have at least one coordinate.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn values(&self) -> Vec<u32> {
        self.coords.iter().map(|c| c.value()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn hamming_weight(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn hamming_distance(&self, other: &FqVector) -> Result<usize> {
        self.check_compatible(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Number of positions where the two vectors coincide.
    pub fn agreement(&self, other: &FqVector) -> Result<usize> {
        Ok(self.len() - self.hamming_distance(other)?)
    }

    pub fn scalar_mul(&self, c: FieldElement) -> FqVector {
        let coords = self.coords.iter().map(|&x| self.spec.mul(c, x)).collect();
        FqVector::from_parts(Arc::clone(&self.spec), coords)
    }

    pub fn add(&self, other: &FqVector) -> Result<FqVector> {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &FqVector) -> Result<FqVector> {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    /// Standard bilinear form `sum u_i v_i`.
    pub fn dot(&self, other: &FqVector) -> Result<FieldElement> {
        self.check_compatible(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(FieldElement::ZERO, |acc, (&a, &b)| {
                self.spec.add(acc, self.spec.mul(a, b))
            }))
    }

    pub(crate) fn check_compatible(&self, other: &FqVector) -> Result<()> {
        if *self.spec != *other.spec {
            return Err(Error::FieldMismatch {
                left: self.spec.order(),
                right: other.spec.order(),
            });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &FqVector,
        f: impl Fn(&FieldSpec, FieldElement, FieldElement) -> FieldElement,
    ) -> Result<FqVector> {
        self.check_compatible(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f(&self.spec, a, b))
            .collect();
        Ok(FqVector::from_parts(Arc::clone(&self.spec), coords))
    }
}

impl PartialEq for FqVector {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec && self.coords == other.coords
    }
}

impl Eq for FqVector {}

impl std::hash::Hash for FqVector {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.spec.order().hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Display for FqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[{}]", self.spec.order(), self)
    }
}

/// Every vector of `F_q^n` in lexicographic order (last coordinate fastest),
/// starting from the zero vector.
pub fn all_vectors(spec: &Arc<FieldSpec>, n: usize) -> impl Iterator<Item = FqVector> + '_ {
    let q = spec.order();
    let total = u64::from(q).pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut coords = vec![FieldElement::ZERO; n];
        for c in coords.iter_mut().rev() {
            *c = FieldElement((idx % u64::from(q)) as u16);
            idx /= u64::from(q);
        }
        FqVector::from_parts(Arc::clone(spec), coords)
    })
}

/// Every nonzero vector of `F_q^n`, in the order of [`all_vectors`].
pub fn nonzero_vectors(spec: &Arc<FieldSpec>, n: usize) -> impl Iterator<Item = FqVector> + '_ {
    all_vectors(spec, n).skip(1)
}
