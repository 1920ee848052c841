/// Size caps shared by the brute-force and enumeration routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of generators of a symmetric-power module.
    pub module_cap: usize,
    /// Maximum number of compositions enumerated for `S_{n,k}`.
    pub enumeration_cap: u128,
    /// Largest weighted truncation degree tried before giving up.
    pub truncation_ceiling: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            module_cap: 2_000,
            enumeration_cap: 10_000_000,
            truncation_ceiling: 2_048,
        }
    }
}
