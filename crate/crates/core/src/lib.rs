//! Compact co-occurrence index.
//!
//! Given a string `S` of length `n` and a query set `Q` of at least two symbols, the
//! index answers for any window length `w`:
//!
//! * `co(w)`: how many length-`w` windows of `S` contain every symbol of `Q`;
//! * `lmco(w)`: how many *left-minimal* such windows (ones that stop qualifying when
//!   their first position is dropped) have length `w`.
//!
//! Space is proportional to `d`, the number of lengths at which `lmco` changes, and
//! each query is one predecessor search.
//!
//! ```
//! use cooc::{CooccurrenceIndex, IndexOptions};
//!
//! let s: Vec<u32> = b"----BC-ACCB--".iter().map(|&b| b.into()).collect();
//! let q: Vec<u32> = b"ABC".iter().map(|&b| b.into()).collect();
//! let idx = CooccurrenceIndex::build(&s, &q, IndexOptions::default()).unwrap();
//! assert_eq!(idx.co(4), 2);
//! assert_eq!(idx.co(8), 6);
//! assert_eq!(idx.d(), 2);
//! ```

pub mod bench;
pub mod delta;
pub mod error;
pub mod gadgets;
pub mod index;
pub mod oracle;
pub mod predecessor;
pub mod scanner;
pub mod text;

pub use delta::{build_delta, DeltaEncoding};
pub use error::{Error, FormatError, Result};
pub use index::{CooccurrenceIndex, IndexMeta, IndexOptions};
pub use predecessor::{PredecessorMap, Variant};
pub use scanner::{scan_minimal, MinimalCooccurrence, QueryProfile};
pub use text::{Corpus, InputMode, TokenId};
