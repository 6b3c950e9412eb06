//! Jordan blocks, component groups and packet descriptors for the split
//! classical groups `Sp(2n, F)` and `SO(2n+1, F)` over a p-adic field.

pub mod antipodes;
pub mod compgroup;
pub mod error;
pub mod fixtures;
pub mod gf2;
pub mod halfint;
pub mod jordan;
pub mod label;
pub mod packets;
pub mod properties;
pub mod reducibility;
pub mod registry;
pub mod segment;
pub mod speh;
pub mod unramified;

pub use antipodes::{AntipodesVerdict, LadderSpec};
pub use compgroup::{BlockMask, ComponentCharacter, ComponentGroup, Sign};
pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use jordan::{JordanBlock, JordanSet, Violation};
pub use label::{CuspidalLabel, GroupFamily, GroupKind, Parity, PhiType, QuadChar, QuadCharSpace};
pub use packets::{Packet, PacketElement, StepKind};
pub use registry::Registry;
pub use segment::Segment;
pub use speh::{GrothendieckElement, Multisegment};
pub use unramified::{IsolationConstraint, UnramifiedParam};
