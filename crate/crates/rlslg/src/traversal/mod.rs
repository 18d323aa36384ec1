//! Node, character and block cursors over the parse tree; substring
//! extraction.

mod cursor;
mod node;

pub use cursor::{extract, traversal_block_size, CharCursor, FastCursor, Traversal};
pub use node::{FrameKind, NodeCursor, Tree};
