pub mod fit;
pub mod profile;
pub mod ratio;
pub mod train;
