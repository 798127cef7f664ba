//! Numerical shadows of the structural results: stack and semistable series,
//! DT extraction, wall-crossing, framed PBW and stabilization checks.
//!
//! The HN recursion runs in count normalization (exact in `q = t^2`) and is
//! converted to the virtual normalization once, by [`bridge`]:
//! `a_d = (−t^{-1})^{(d,d)} c_d|_{t ↦ t^{-1}}`. For `A_2` at `d = (1,1)` in
//! the chamber where `(1,1)` is semistable this sends `1/(q−1)` to `−t/(1−q)`.

mod dt;
mod framed;
mod series;

pub use dt::{
    dt_all_slopes, dt_from_series, dt_invariants, factorize, slope_part, t_minus_t_inv, wallcross_check, DtEntry,
    DtPackage, Factorization, WallcrossReport,
};
pub use framed::{
    framed_classes, framed_pbw_check, framed_vir, projective_space_vir, slope_or_zero, stabilization_profile,
    FramedClass, PbwReport, StabilizationReport, StabilizationRow,
};
pub use series::{
    bridge, closed_form_stack_series, count_semistable_series, count_stack_series, group_order, hn_reassembly_residual,
    semistable_counts_with, stack_count, vir_series,
};
