//! Compressed bitvector backends, drop-in substitutes for
//! [`PlainBitVector`](crate::bitvec::PlainBitVector).

pub mod rrr;
pub mod sd;

pub use rrr::RrrVector;
pub use sd::SdVector;
