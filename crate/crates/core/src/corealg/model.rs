use std::fmt;

use thiserror::Error;

/// Which graded ring a [`ModelSpec`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    /// `Q[h, xi] / (h^{r+1}, xi (xi - h)^{r+1})`, the local model of a simple P^r flop.
    FlopLocal,
    /// `Q[h, xi] / (h^{r+1}, xi (xi - h)^{r'+1})`, the local model of an (r, r') flip.
    FlipLocal,
    /// `Q[h] / (h^{r+1})`, the exceptional locus `Z = P^r` itself.
    ZOnly,
    /// `Q[x, y] / (x^{r+1}, y^{r'+1})`, the exceptional divisor `E = P^r x P^{r'}` of the blow-up.
    EOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelSpec {
    pub r: u32,
    pub rprime: u32,
    pub kind: ModelKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("rank must be positive (got r = {r}, r' = {rprime})")]
    NonPositiveRank { r: u32, rprime: u32 },
    #[error("a flop local model needs r = r' (got r = {r}, r' = {rprime})")]
    FlopRankMismatch { r: u32, rprime: u32 },
}

impl ModelSpec {
    pub fn new(r: u32, rprime: u32, kind: ModelKind) -> Result<Self, ModelError> {
        if r == 0 || rprime == 0 {
            return Err(ModelError::NonPositiveRank { r, rprime });
        }
        if kind == ModelKind::FlopLocal && r != rprime {
            return Err(ModelError::FlopRankMismatch { r, rprime });
        }
        Ok(ModelSpec { r, rprime, kind })
    }

    /// The flop local model `P_{P^r}(O(-1)^{r+1} + O)`; panics on `r == 0`.
    pub fn flop(r: u32) -> Self {
        Self::new(r, r, ModelKind::FlopLocal).expect("flop rank must be positive")
    }

    pub fn flip(r: u32, rprime: u32) -> Self {
        Self::new(r, rprime, ModelKind::FlipLocal).expect("flip ranks must be positive")
    }

    pub fn z_only(r: u32) -> Self {
        Self::new(r, r, ModelKind::ZOnly).expect("rank must be positive")
    }

    pub fn e_only(r: u32, rprime: u32) -> Self {
        Self::new(r, rprime, ModelKind::EOnly).expect("ranks must be positive")
    }

    /// Complex dimension.
    pub fn dim(&self) -> u32 {
        match self.kind {
            ModelKind::FlopLocal | ModelKind::FlipLocal => self.r + self.rprime + 1,
            ModelKind::ZOnly => self.r,
            ModelKind::EOnly => self.r + self.rprime,
        }
    }

    /// Local models of X and X' for a flip (or a flop, where the two coincide).
    pub fn primed(&self) -> Self {
        match self.kind {
            ModelKind::FlopLocal => *self,
            ModelKind::FlipLocal => ModelSpec {
                r: self.rprime,
                rprime: self.r,
                kind: self.kind,
            },
            ModelKind::ZOnly => *self,
            ModelKind::EOnly => ModelSpec {
                r: self.rprime,
                rprime: self.r,
                kind: self.kind,
            },
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(self.kind, ModelKind::FlopLocal | ModelKind::FlipLocal)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::FlopLocal => write!(f, "flop(r={})", self.r),
            ModelKind::FlipLocal => write!(f, "flip(r={}, r'={})", self.r, self.rprime),
            ModelKind::ZOnly => write!(f, "P^{}", self.r),
            ModelKind::EOnly => write!(f, "P^{} x P^{}", self.r, self.rprime),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(ModelSpec::flop(2).dim(), 5);
        assert_eq!(ModelSpec::flip(2, 3).dim(), 6);
        assert_eq!(ModelSpec::z_only(3).dim(), 3);
        assert_eq!(ModelSpec::e_only(2, 1).dim(), 3);
    }

    #[test]
    fn validation() {
        assert_eq!(
            ModelSpec::new(2, 3, ModelKind::FlopLocal),
            Err(ModelError::FlopRankMismatch { r: 2, rprime: 3 })
        );
        assert!(ModelSpec::new(0, 1, ModelKind::FlipLocal).is_err());
        assert_eq!(ModelSpec::flip(1, 3).primed(), ModelSpec::flip(3, 1));
    }
}
