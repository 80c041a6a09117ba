//! Mixed-radix indexing of parent configurations.
//!
//! A configuration of an ordered parent list is an outcome index per parent.
//! Its index is `sum_k outcome_k * stride_k`, with the last declared parent
//! varying fastest. Every table in a diagram is laid out in this order.

use crate::error::{Error, Result};
use crate::model::NodeId;

/// Radix description of an ordered parent list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigSpace {
    parents: Vec<NodeId>,
    cards: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

/// One configuration of a [`ConfigSpace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentConfig {
    pub index: usize,
    pub assignment: Vec<usize>,
}

impl ConfigSpace {
    pub fn new(parents: Vec<NodeId>, cards: Vec<usize>) -> Self {
        assert_eq!(parents.len(), cards.len(), "one cardinality per parent");
        let mut strides = vec![1; cards.len()];
        let mut size = 1usize;
        for k in (0..cards.len()).rev() {
            strides[k] = size;
            size *= cards[k];
        }
        ConfigSpace { parents, cards, strides, size }
    }

    pub fn parents(&self) -> &[NodeId] {
        &self.parents
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    /// Number of configurations (1 for an empty parent list).
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn position(&self, node: NodeId) -> Option<usize> {
        self.parents.iter().position(|&p| p == node)
    }

    pub fn index(&self, assignment: &[usize]) -> Result<usize> {
        if assignment.len() != self.cards.len() {
            return Err(Error::ShapeMismatch(format!(
                "assignment has {} entries for {} parents",
                assignment.len(),
                self.cards.len()
            )));
        }
        let mut index = 0;
        for (k, (&a, &c)) in assignment.iter().zip(&self.cards).enumerate() {
            if a >= c {
                return Err(Error::OutOfRange { index: a, size: c });
            }
            index += a * self.strides[k];
        }
        Ok(index)
    }

    pub fn assignment(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.size {
            return Err(Error::OutOfRange { index, size: self.size });
        }
        Ok(self
            .cards
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (index / s) % c)
            .collect())
    }

    /// Index of the configuration read off a lookup from parent to outcome.
    ///
    /// The lookup must return in-range outcomes; this is the hot path of every
    /// transformation and is not checked.
    pub fn index_with(&self, mut outcome_of: impl FnMut(NodeId) -> usize) -> usize {
        self.parents
            .iter()
            .zip(&self.strides)
            .map(|(&p, &s)| outcome_of(p) * s)
            .sum()
    }

    /// All configurations in index order.
    pub fn iter(&self) -> impl Iterator<Item = ParentConfig> + '_ {
        (0..self.size).map(move |index| ParentConfig {
            index,
            assignment: self.assignment(index).expect("index within size"),
        })
    }
}
