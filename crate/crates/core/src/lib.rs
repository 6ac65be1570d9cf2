pub mod boardman;
pub mod cache;
pub mod error;
pub mod gf2;
pub mod group;
pub mod invariants;
pub mod kameko;
pub mod monomial;
pub mod parse;
pub mod reducer;
pub mod report;
pub mod steenrod;
