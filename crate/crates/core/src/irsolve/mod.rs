//! Nodal analysis of the PDN resistive network under instance current
//! loads, and the effective-instance-voltage statistics behind the IR
//! validity criterion.

mod loads;
mod solver;

pub use loads::{instance_currents, CurrentLoads};
pub use solver::{eiv_percentile, ir_valid, solve_ir, IrResult};
