//! Classical local factors over fields: Gauss sums, ε, ε₀, L and γ, their
//! Weil–Deligne versions, and the reduction of ε₀ modulo ℓ.

mod gauss;
mod local;
mod psi;
mod spectral;

pub use gauss::{conjugate, gauss_sum, gauss_sum_at};
pub use local::{
    epsilon0_field, epsilon0_monomial, epsilon0_reduce_mod_ell, epsilon_character, epsilon_field, epsilon_monomial,
    epsilon_wd, gamma_field, gamma_wd, l_factor, l_factor_wd, lemma45_check, lemma45_sides, local_factors, LocalFactors, Monomial,
};
pub use psi::AdditiveCharacter;
pub use spectral::{coefficient_extension, epsilon0_prepared, tame_spectral_data, OrbitBlock, SpectralData};
