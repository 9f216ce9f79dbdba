//! Finite truncated simplicial and multi-simplicial sets, finite groupoids,
//! and the machinery for fundamental n-fold groupoids of finite simplicial
//! sets: décalage, ordinal sum, horn filling, coset enumeration, weak
//! globularity, Tamsamani and pseudo n-fold groupoid classification, and the
//! algebraic homotopy groups `ω_k`.
//!
//! Everything here is exact and combinatorial: cells are interned integers,
//! all structure maps are dense tables, and every checker is exhaustive
//! within the stated truncation bounds.

pub mod compare;
pub mod error;
pub mod fibrancy;
pub mod fundamental;
pub mod groupoid;
pub mod json;
pub mod msset;
pub mod nfold;
pub mod presentation;
pub mod report;
pub mod sset;

pub use error::Error;
pub use msset::{MultiSSetMap, TruncatedMultiSSet};
pub use nfold::{NFoldGroupoid, NFoldMap};
pub use groupoid::{FiniteGroupoid, GroupoidMap};


pub use presentation::{EnumeratedGroupoid, GroupoidPresentation};
pub use report::{Report, Violation};
pub use sset::{SimplicialMap, TruncatedSSet};
