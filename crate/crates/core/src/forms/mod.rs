//! (0,q)-forms: multi-indices, pointwise values, fields and finite-difference dbar.

pub mod dbar;
pub mod expr;
pub mod field;
pub mod multi_index;
pub mod value;

pub use dbar::{dbar_closed_residual, dbar_fd, FdDbar};
pub use expr::Expr;
pub use field::{scalar_field, Combination, ExprField, FnField, FormField, ZeroField};
pub use multi_index::{combos, wedge_sign, MultiIndex};
pub use value::FormValue;
