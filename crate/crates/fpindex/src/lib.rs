//! Fixed-point indices of boundary homeomorphisms between polygonal Jordan
//! curves, with the torus picture used to prescribe three point pairs and a
//! finite check of the incompatibility of packings.

pub mod exact_geom;
pub mod jordan;
pub mod plmap;
pub mod torus;
pub mod gen;
pub mod prescribe;
pub mod packing;
pub mod fixtures;
pub mod io;
pub mod svg;
