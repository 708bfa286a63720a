//! Permutations of {0, ..., n-1}, stored as index maps rather than matrices.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermutationError {
    /// Some image is out of range or appears twice.
    NotABijection { n: usize },
}

impl fmt::Display for PermutationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermutationError::NotABijection { n } => {
                write!(f, "images are not a bijection on 0..{n}")
            }
        }
    }
}

impl std::error::Error for PermutationError {}

/// A bijection on `{0, ..., n-1}`; `images[i]` is the destination of index `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Validates that `images` is a bijection on its index range.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermutationError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || seen[img] {
                return Err(PermutationError::NotABijection { n });
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    /// The permutation swapping `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "transposition indices out of range");
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }
}
