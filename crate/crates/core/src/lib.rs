//! Exact forward and backward dynamics of the Collatz map and of
//! Syracuse-type maps `x ↦ (m_i·x + r_i)/d` on the positive integers.
//!
//! ```
//! use syrdyn::maps::MapDescriptor;
//! use syrdyn::numeric::nat;
//! use syrdyn::trajectory::{iterate, Limits};
//!
//! let report = iterate(&MapDescriptor::collatz(), &nat(27), &Limits::default()).unwrap();
//! assert_eq!(report.cycle().unwrap().members(), &[nat(1), nat(2)]);
//! ```

pub mod chains;
pub mod cli;
pub mod maps;
pub mod measure;
pub mod numeric;
pub mod partition;
pub mod trajectory;
