//! Central tolerance table.
//!
//! Every threshold used by the engines and the verification suites is
//! defined here with its default. Defaults are sized for unit-scale
//! geometry evaluated from analytic jets: classification tolerances sit
//! roughly one order of magnitude above the observed numerical noise of
//! the quantity they gate, and identity tolerances degrade with the
//! derivative order they involve.

/// Tolerances used across the engines. Construct with [`Tolerances::default`]
/// and override individual fields as needed.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Absolute bound on the self inner product of a Euclidean-normalized
    /// vector below which the vector counts as null.
    pub null: f64,
    /// Relative singular-value cutoff for numerical rank decisions.
    pub rank: f64,
    /// Curvature functions below this are treated as zero when deciding
    /// the osculating order.
    pub curvature: f64,
    /// Relative deviation bound for "this curvature function is constant".
    pub constancy: f64,
    /// Tangential acceleration bound for the geodesic flag of a traced
    /// normal section, per unit pseudo-speed.
    pub geodesic_flag: f64,
    /// Relative third-singular-value cutoff declaring a section d-planar.
    pub planarity: f64,
    /// Frame-equation residual bound for the Frenet recursion.
    pub frenet_residual: f64,
    /// Residual bound for the rank-2 helix identity on the third derivative.
    pub w2_identity: f64,
    /// Residual bound for the rank-3 helix identity on the fourth derivative.
    pub w3_identity: f64,
    /// Residual bound for the second-derivative normal-section identity.
    pub section_order2: f64,
    /// Residual bound for the third-derivative normal-section identity.
    pub section_order3: f64,
    /// Residual bound for the fourth-derivative normal-section identity.
    pub section_order4: f64,
    /// Residual bound for the shape-operator eigen identity on sections.
    pub shape_identity: f64,
    /// Residual bound for the frame decomposition of the derivative of h.
    pub decomposition: f64,
    /// Spread bound for isotropy constants.
    pub isotropy_spread: f64,
    /// Spread bound for the squared norm of the derivative of h over the
    /// unit tangent bundle.
    pub parallel_spread: f64,
    /// Residual bound for shape-operator duality.
    pub duality: f64,
    /// Residual bound for the symmetry of the derivative of h in its slots.
    pub codazzi: f64,
    /// Bound on tangential components of h and related normal-valued fields.
    pub normal_valued: f64,
    /// Conserved-quantity drift bound for geodesic integration, per unit
    /// arclength.
    pub conservation: f64,
    /// Residual bound for the intrinsic rank-2 helix criterion.
    pub intrinsic_w2: f64,
    /// Residual bound for the totally-umbilical identity.
    pub umbilical: f64,
    /// Residual bound for `D H = 0` (parallel mean curvature).
    pub parallel_h: f64,
    /// Newton convergence tolerance for corrector steps.
    pub newton: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            null: 1e-8,
            rank: 1e-8,
            curvature: 1e-6,
            constancy: 1e-5,
            geodesic_flag: 1e-6,
            planarity: 1e-8,
            frenet_residual: 1e-6,
            w2_identity: 1e-8,
            w3_identity: 1e-6,
            section_order2: 1e-7,
            section_order3: 1e-5,
            section_order4: 1e-4,
            shape_identity: 1e-6,
            decomposition: 1e-5,
            isotropy_spread: 1e-8,
            parallel_spread: 1e-8,
            duality: 1e-8,
            codazzi: 1e-5,
            normal_valued: 1e-8,
            conservation: 1e-9,
            intrinsic_w2: 1e-6,
            umbilical: 1e-8,
            parallel_h: 1e-7,
            newton: 1e-13,
        }
    }
}

impl Tolerances {
    /// Scale every residual-style tolerance by `factor`, leaving the
    /// structural cutoffs (`null`, `rank`, `newton`) untouched.
    #[must_use]
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            null: self.null,
            rank: self.rank,
            newton: self.newton,
            curvature: self.curvature,
            constancy: self.constancy * factor,
            geodesic_flag: self.geodesic_flag * factor,
            planarity: self.planarity * factor,
            frenet_residual: self.frenet_residual * factor,
            w2_identity: self.w2_identity * factor,
            w3_identity: self.w3_identity * factor,
            section_order2: self.section_order2 * factor,
            section_order3: self.section_order3 * factor,
            section_order4: self.section_order4 * factor,
            shape_identity: self.shape_identity * factor,
            decomposition: self.decomposition * factor,
            isotropy_spread: self.isotropy_spread * factor,
            parallel_spread: self.parallel_spread * factor,
            duality: self.duality * factor,
            codazzi: self.codazzi * factor,
            normal_valued: self.normal_valued * factor,
            conservation: self.conservation * factor,
            intrinsic_w2: self.intrinsic_w2 * factor,
            umbilical: self.umbilical * factor,
            parallel_h: self.parallel_h * factor,
        }
    }
}
