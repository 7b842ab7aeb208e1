pub mod beamforming;
pub mod channel;
pub mod conic;
pub mod driver;
pub mod experiment;
pub mod numerics;
pub mod phase;
pub mod system;
