pub mod costmodel;
pub mod mpcore;
pub mod params;
pub mod pipesim;
pub mod reducers;
