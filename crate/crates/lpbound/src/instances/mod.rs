//! Named example instances, seeded random corpora, and the hand-built
//! witnesses attached to specific instance families.

pub mod lne;
pub mod random;
pub mod standard;
pub mod tribes;

use crate::model::{CommInstance, QueryInstance};

/// A generated instance of either flavor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Comm(CommInstance),
    Query(QueryInstance),
}

impl Instance {
    pub fn as_comm(&self) -> Option<&CommInstance> {
        match self {
            Instance::Comm(c) => Some(c),
            Instance::Query(_) => None,
        }
    }

    pub fn as_query(&self) -> Option<&QueryInstance> {
        match self {
            Instance::Query(q) => Some(q),
            Instance::Comm(_) => None,
        }
    }
}
