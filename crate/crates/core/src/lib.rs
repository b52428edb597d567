//! Headless software renderer for robust stenciled shadow volumes.
//!
//! Shadow volumes are closed to infinity, projected with an infinite far
//! plane, and counted in a software stencil buffer; a ray-cast oracle checks
//! the resulting shadow masks.

pub mod hgeom;
pub mod mesh;
pub mod volume;
pub mod raster;
pub mod pipeline;
pub mod oracle;
pub mod scenes;
pub mod cli;
