pub mod bench;
pub mod eval;
pub mod render;
pub mod synth;
pub mod targets;
pub mod walk;
