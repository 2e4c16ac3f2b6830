//! Bipartite Cayley digraphs over finite abelian groups.
//!
//! ```
//! use bicayley::cayley::{cayley_index, ConnectionSet};
//! use bicayley::group::AbelianGroup;
//!
//! let c6 = AbelianGroup::new(&[6])?;
//! let s = ConnectionSet::from_elements(&c6, [1, 3, 5])?;
//! assert_eq!(cayley_index(&c6, &s)?, 12u32.into());
//! # Ok::<(), bicayley::Error>(())
//! ```

pub mod aut;
pub mod bitset;
pub mod bounds;
pub mod cayley;
pub mod classify;
pub mod cli;
pub mod config;
pub mod digraph;
pub mod error;
pub mod group;
pub mod search;
pub mod survey;

pub use error::{Error, Result};
