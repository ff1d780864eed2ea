//! Direction labels: the nonempty subsets of coordinates that can be jointly
//! large. A direction is stored as a 64-bit mask when every index fits (fast
//! hashing and set operations) and as a sorted index list otherwise; the two
//! representations never overlap for the same index set.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonempty set of 1-based coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Bit i-1 set means index i is in the direction (all indices <= 64).
    Mask(u64),
    /// Strictly increasing 1-based indices, at least one of them > 64.
    Indices(Vec<u32>),
}

impl Direction {
    /// Builds a direction from strictly increasing 1-based indices.
    pub fn from_indices(indices: &[u32]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidDirection {
                reason: "direction must be nonempty".into(),
            });
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidDirection {
                    reason: format!("indices must be strictly increasing, got {indices:?}"),
                });
            }
        }
        if indices[0] == 0 {
            return Err(Error::InvalidDirection {
                reason: "indices are 1-based; 0 is not a valid index".into(),
            });
        }
        Ok(Self::from_sorted_unchecked(indices))
    }

    fn from_sorted_unchecked(indices: &[u32]) -> Self {
        let max = *indices.last().expect("nonempty");
        if max <= 64 {
            let mut mask = 0u64;
            for &i in indices {
                mask |= 1u64 << (i - 1);
            }
            Direction::Mask(mask)
        } else {
            Direction::Indices(indices.to_vec())
        }
    }

    /// Builds the direction {i : support[i]} from a 0-based support bitmap.
    pub(crate) fn from_support(support: &[bool]) -> Result<Self> {
        let indices: Vec<u32> = support
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i as u32 + 1)
            .collect();
        Self::from_indices(&indices)
    }

    /// Singleton direction {i} (1-based).
    pub fn singleton(i: u32) -> Self {
        Self::from_indices(&[i]).expect("singleton index >= 1")
    }

    /// Number of coordinates in the direction.
    pub fn len(&self) -> usize {
        match self {
            Direction::Mask(m) => m.count_ones() as usize,
            Direction::Indices(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false // directions are nonempty by construction
    }

    /// True if the 1-based index belongs to the direction.
    pub fn contains(&self, index: u32) -> bool {
        match self {
            Direction::Mask(m) => (1..=64).contains(&index) && (m >> (index - 1)) & 1 == 1,
            Direction::Indices(v) => v.binary_search(&index).is_ok(),
        }
    }

    /// The largest index in the direction.
    pub fn max_index(&self) -> u32 {
        match self {
            Direction::Mask(m) => 64 - m.leading_zeros(),
            Direction::Indices(v) => *v.last().expect("nonempty"),
        }
    }

    /// True if all indices lie in 1..=d.
    pub fn fits_dimension(&self, d: usize) -> bool {
        self.max_index() as usize <= d
    }

    /// Sorted 1-based indices.
    pub fn indices(&self) -> Vec<u32> {
        match self {
            Direction::Mask(m) => {
                let mut out = Vec::with_capacity(m.count_ones() as usize);
                let mut rem = *m;
                while rem != 0 {
                    let i = rem.trailing_zeros();
                    out.push(i + 1);
                    rem &= rem - 1;
                }
                out
            }
            Direction::Indices(v) => v.clone(),
        }
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Direction {
    /// Lexicographic order on the sorted index lists (the deterministic
    /// tie-break for equal counts).
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Direction::Mask(a), Direction::Mask(b)) => cmp_masks_lex(*a, *b),
            _ => self.indices().cmp(&other.indices()),
        }
    }
}

/// Lexicographic comparison of two index sets held as bitmasks. The lowest
/// differing bit decides unless the other mask has no bits from there on, in
/// which case the other mask is a strict prefix and sorts first.
fn cmp_masks_lex(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let diff = a ^ b;
    let i = diff.trailing_zeros();
    if (a >> i) & 1 == 1 {
        if b >> i == 0 {
            Ordering::Greater // b is a strict prefix of a
        } else {
            Ordering::Less // a's element i precedes b's next element
        }
    } else if a >> i == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (j, i) in self.indices().iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<u32>::deserialize(deserializer)?;
        Direction::from_indices(&indices).map_err(D::Error::custom)
    }
}
