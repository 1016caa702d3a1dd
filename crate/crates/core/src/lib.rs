//! Response of a cavity coupled to two phonon-coupled mechanical resonators
//! under a strong control field, a weak probe and coherent mechanical drives.

pub mod config;
pub mod cubic;
pub mod error;
pub mod params;
pub mod scan;
pub mod sideband;
pub mod stability;
pub mod steady;
pub mod timedomain;

pub use config::{OperatingPoint, Scenario};
pub use error::{OmitError, Result};
pub use params::{DriveConfig, PumpConvention, SystemParams};
pub use scan::{run_scan, ScanKind, ScanResult, ScanSpec};
pub use sideband::{solve, SidebandBlock, SidebandSolution};
pub use stability::{analyze, StabilityReport};
pub use steady::{solve_steady, BranchPolicy, SteadyState};
