pub mod circumscription;
pub mod constructions;
pub mod delaunay;
pub mod geom;
pub mod io;
pub mod random;
pub mod shape;
pub mod spanner;
pub mod svg;
pub mod sweep;
pub mod verify;
pub mod walk;
