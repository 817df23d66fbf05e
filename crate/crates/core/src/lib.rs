//! Entanglement harvesting by two static Unruh-DeWitt detectors in a weak
//! plane gravitational wave.
//!
//! * [`specfun`]: error-function family, Faddeeva function, scaled products.
//! * [`model`]: dimensionless parameters, validation, config files.
//! * [`closedform`]: transition probability, X, C, concurrence, correlation.
//! * [`oracle`]: quadrature oracles for every closed form.
//! * [`sweep`]: parameter grids, figure presets, CSV and SVG output.

pub mod closedform;
pub mod model;
pub mod oracle;
pub mod specfun;
pub mod sweep;

pub use closedform::{harvest, HarvestReport};
pub use model::DimensionlessParams;
pub use specfun::ComplexValue;
