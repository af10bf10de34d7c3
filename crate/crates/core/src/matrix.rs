use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::substitution::Substitution;

/// Letter-count matrix of a substitution.
///
/// Column `j` is the abelianization of the image of letter `j`: entry
/// `(i, j)` counts how often letter `i` occurs in that image. Column sums
/// are therefore the image lengths. The transpose convention is equally
/// common elsewhere; everything in this crate assumes columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl SubstitutionMatrix {
    pub fn from_substitution(sub: &Substitution) -> Self {
        let n = sub.alphabet().len();
        let mut entries = vec![0u64; n * n];
        for j in 0..n {
            for &l in sub.image(j as u32).letters() {
                entries[l as usize * n + j] += 1;
            }
        }
        SubstitutionMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Image lengths, one per letter.
    pub fn column_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                sums[j] += self.entry(i, j);
            }
        }
        sums
    }

    /// Exponent up to which an all-positive boolean power must appear for
    /// primitive matrices.
    pub fn wielandt_bound(&self) -> u32 {
        let n = self.n as u32;
        (n - 1) * (n - 1) + 1
    }

    /// Smallest `k` with every entry of the k-th boolean power positive, or
    /// `None` when no such `k` exists up to the Wielandt bound.
    pub fn primitivity_power(&self) -> Option<u32> {
        let n = self.n;
        let adj: Vec<bool> = self.entries.iter().map(|&e| e > 0).collect();
        let mut power = adj.clone();
        for k in 1..=self.wielandt_bound() {
            if power.iter().all(|&b| b) {
                return Some(k);
            }
            let mut next = vec![false; n * n];
            for i in 0..n {
                for l in 0..n {
                    if power[i * n + l] {
                        for j in 0..n {
                            if adj[l * n + j] {
                                next[i * n + j] = true;
                            }
                        }
                    }
                }
            }
            power = next;
        }
        if power.iter().all(|&b| b) {
            Some(self.wielandt_bound())
        } else {
            None
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.primitivity_power().is_some()
    }

    pub(crate) fn to_scalar<S: Scalar>(&self) -> Vec<S> {
        self.entries
            .iter()
            .map(|&e| crate::scalar::s_u64(e))
            .collect()
    }
}

/// Fails with the tested power when the substitution is not primitive.
pub(crate) fn ensure_primitive(sub: &Substitution) -> Result<()> {
    ensure_primitive_matrix(&sub.matrix())
}

pub(crate) fn ensure_primitive_matrix(m: &SubstitutionMatrix) -> Result<()> {
    if m.is_primitive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "matrix is not primitive: boolean power {} still has zero entries",
            m.wielandt_bound()
        )))
    }
}
