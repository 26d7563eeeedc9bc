//! Asymptotic approximations for small and large pressure gradients.

pub mod large_g;
pub mod small_g;

pub use large_g::{
    center_width, composite_large_g, extract_outer_states, layer_width, nearest_outer_state,
    outer_value, solve_center_layer, solve_wall_layer, LargeGComposite, LayerSolution, OuterState,
    Side,
};
pub use small_g::{small_g_correction, SmallGCorrection};
