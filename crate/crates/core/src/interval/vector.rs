use std::ops::{Index, IndexMut};

use serde::Serialize;

use super::Interval;

/// Interval vector of fixed dimension.
#[derive(Clone, PartialEq, Debug, Serialize)]
#[serde(transparent)]
pub struct IntervalVector {
    components: Vec<Interval>,
}

impl IntervalVector {
    pub fn new(components: Vec<Interval>) -> Self {
        assert!(!components.is_empty(), "dimension must be positive");
        IntervalVector { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.components
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interval> {
        self.components.iter()
    }

    pub fn max_width(&self) -> f64 {
        self.components
            .iter()
            .map(Interval::width)
            .fold(0.0, f64::max)
    }

    pub fn subset_of(&self, other: &IntervalVector) -> bool {
        self.dim() == other.dim() && self.iter().zip(other.iter()).all(|(a, b)| a.subset_of(b))
    }

    pub fn is_bounded(&self) -> bool {
        self.iter().all(Interval::is_bounded)
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.components[i]
    }
}

impl IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.components[i]
    }
}

impl From<Vec<Interval>> for IntervalVector {
    fn from(v: Vec<Interval>) -> Self {
        IntervalVector::new(v)
    }
}
