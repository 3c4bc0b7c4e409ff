pub mod error;
pub mod formal;
pub mod deligne;
pub mod dgla;
pub mod algebroid;
pub mod notation;
pub mod random;
pub mod simplicial;
pub mod suites;
pub mod weak_mc;
