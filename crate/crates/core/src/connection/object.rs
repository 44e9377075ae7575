use std::cmp::Ordering;
use std::fmt;

use super::ExponentialFactor;
use crate::error::{Error, Result};

/// One summand `E_{f,r} ⊗ J_m` of a formal Levelt–Turrittin sum.
#[derive(Clone, Debug, PartialEq)]
pub struct LTComponent {
    pub factor: ExponentialFactor,
    pub jordan: u32,
}

impl LTComponent {
    pub fn new(factor: ExponentialFactor, jordan: u32) -> Result<Self> {
        if jordan == 0 {
            return Err(Error::Invalid("Jordan block size must be positive".into()));
        }
        Ok(LTComponent {
            factor: factor.canonicalize()?,
            jordan,
        })
    }

    pub fn rank(&self) -> u32 {
        self.factor.ramification() * self.jordan
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        self.factor
            .sort_key()
            .cmp(&other.factor.sort_key())
            .then(self.jordan.cmp(&other.jordan))
    }
}

impl fmt::Display for LTComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.jordan == 1 {
            write!(f, "{}", self.factor)
        } else {
            write!(f, "{} ⊗ J{}", self.factor, self.jordan)
        }
    }
}

/// A direct sum of components, kept sorted by slope, ramification and text.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LTObject {
    components: Vec<LTComponent>,
}

impl LTObject {
    pub fn new(mut components: Vec<LTComponent>) -> Self {
        components.sort_by(|a, b| a.cmp_key(b));
        LTObject { components }
    }

    pub fn single(factor: ExponentialFactor) -> Result<Self> {
        Ok(Self::new(vec![LTComponent::new(factor, 1)?]))
    }

    pub fn components(&self) -> &[LTComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.components.iter().map(LTComponent::rank).sum()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.components
                .iter()
                .chain(&other.components)
                .cloned()
                .collect(),
        )
    }

    /// Pair components up to twist. Returns the twist index used for each
    /// component of `self`, in order, or `None` when the sums differ.
    pub fn iso(&self, other: &Self) -> Result<Option<Vec<u32>>> {
        if self.len() != other.len() {
            return Ok(None);
        }
        let n = self.len();
        // candidate[i] lists (j, twist) with self_i ≅ other_j
        let mut candidates = Vec::with_capacity(n);
        for a in &self.components {
            let mut row = Vec::new();
            for (j, b) in other.components.iter().enumerate() {
                if a.jordan != b.jordan {
                    continue;
                }
                if let Some(k) = a.factor.iso_equal(&b.factor)? {
                    row.push((j, k));
                }
            }
            candidates.push(row);
        }
        let mut used = vec![false; n];
        let mut twists = Vec::with_capacity(n);
        Ok(match_from(0, &candidates, &mut used, &mut twists).then_some(twists))
    }

    pub fn is_iso(&self, other: &Self) -> Result<bool> {
        Ok(self.iso(other)?.is_some())
    }
}

fn match_from(
    i: usize,
    candidates: &[Vec<(usize, u32)>],
    used: &mut [bool],
    twists: &mut Vec<u32>,
) -> bool {
    if i == candidates.len() {
        return true;
    }
    for &(j, k) in &candidates[i] {
        if used[j] {
            continue;
        }
        used[j] = true;
        twists.push(k);
        if match_from(i + 1, candidates, used, twists) {
            return true;
        }
        twists.pop();
        used[j] = false;
    }
    false
}

impl fmt::Display for LTObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
