//! Almost-sure performance guarantees for the downlink of cellular networks
//! whose base stations obey a hardcore distance constraint.
//!
//! * [`pathloss`]: attenuation models and their tail integrals.
//! * [`bounds`]: ball-regulation constants and interference upper bounds.
//! * [`guarantees`]: SINR/rate guarantees, critical hardcore distance `H_K*`
//!   and reduced power `P_K*`.
//! * [`hexnet`]: the hexagonal (triangular lattice) network with reuse 1/3/4.
//! * [`pointset`]: lattices, colorings and Matérn type-II samples.
//! * [`montecarlo`]: empirical checks of the bounds on sampled networks.
//!
//! ```
//! use hcnet::{bounds, guarantees, PathLoss, LinkBudget};
//!
//! let model = PathLoss::power_law(4.0)?;
//! let d = 4.0 / 3f64.sqrt();
//! let link = LinkBudget::from_snr_db(1.0, 0.0, d, model.clone())?;
//! let cp = guarantees::critical_power(&link, 2.0, 3, 2.0 * 3f64.sqrt())?;
//! assert!((cp.p_k_star - 0.7315).abs() < 1e-3);
//! assert!(bounds::interference_bound(&model, 2.0, d)? < 0.19);
//! # Ok::<(), hcnet::Error>(())
//! ```

pub mod bounds;
pub mod error;
pub mod guarantees;
pub mod hexnet;
pub mod montecarlo;
pub mod pathloss;
pub mod pointset;
pub mod quadrature;

pub use bounds::BallRegulation;
pub use error::{Error, Result};
pub use guarantees::{CriticalPower, LinkBudget, LogBase, RateGuarantee};
pub use pathloss::{PathLoss, Table};
pub use pointset::{HardcoreSpec, MarkedPointSet, Point, Reuse, Window};
