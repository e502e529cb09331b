//! Exact rational Khovanov homology computed from a link diagram.

pub mod cube;
pub mod rank;
mod scan;

use serde::Serialize;
use thiserror::Error;

use crate::bigraded::BigradedSpace;
use crate::diagram::{DiagramError, LinkDiagram};
use crate::formula::PretzelSpec;

pub use cube::{resolve_state, CubeState};
pub use rank::matrix_rank;

#[derive(Debug, Error)]
pub enum KhError {
    #[error("diagram has {crossings} crossings, limit is {max}")]
    TooLarge { crossings: usize, max: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// crossing by crossing with delooping and Gaussian elimination
    Scan,
    /// full cube of resolutions, rank of every differential block
    Cube,
}

#[derive(Clone, Copy, Debug)]
pub struct KhConfig {
    pub max_crossings: usize,
    pub engine: Engine,
    /// cube engine only: cancel unit entries in machine integers before exact elimination
    pub pre_reduce: bool,
    pub check_d_squared: bool,
}

impl Default for KhConfig {
    fn default() -> Self {
        Self {
            max_crossings: 18,
            engine: Engine::Scan,
            pre_reduce: true,
            check_d_squared: false,
        }
    }
}

/// Largest diagram the cube engine accepts.
pub const CUBE_LIMIT: usize = 18;

pub fn homology(d: &LinkDiagram) -> Result<BigradedSpace, KhError> {
    homology_with(d, &KhConfig::default())
}

pub fn homology_with(d: &LinkDiagram, cfg: &KhConfig) -> Result<BigradedSpace, KhError> {
    let n = d.crossing_count();
    let max = match cfg.engine {
        Engine::Scan => cfg.max_crossings,
        Engine::Cube => cfg.max_crossings.min(CUBE_LIMIT),
    };
    if n > max {
        return Err(KhError::TooLarge { crossings: n, max });
    }
    match cfg.engine {
        Engine::Scan => scan::homology(d, cfg.check_d_squared),
        Engine::Cube => with_pool(|| cube::homology(d, cfg.pre_reduce, cfg.check_d_squared)),
    }
}

pub fn pretzel_homology(spec: &PretzelSpec) -> Result<BigradedSpace, KhError> {
    homology(&spec.diagram()?)
}

/// Runs `f` in a rayon pool sized by `PRETZEL_KH_THREADS` when that is set.
fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match std::env::var("PRETZEL_KH_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(k) if k > 0 => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexStats {
    pub crossings: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub components: usize,
    pub generators: u64,
}

pub fn complex_stats(d: &LinkDiagram) -> ComplexStats {
    let generators = if d.crossing_count() <= 20 {
        cube::generator_counts(d).values().sum()
    } else {
        0
    };
    ComplexStats {
        crossings: d.crossing_count(),
        n_plus: d.n_plus(),
        n_minus: d.n_minus(),
        components: d.component_count(),
        generators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{pretzel_diagram, torus2_diagram};

    fn both(d: &LinkDiagram) -> BigradedSpace {
        let scan = homology_with(
            d,
            &KhConfig {
                check_d_squared: true,
                ..Default::default()
            },
        )
        .unwrap();
        let cube = homology_with(
            d,
            &KhConfig {
                engine: Engine::Cube,
                check_d_squared: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(scan, cube, "engines disagree");
        scan
    }

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(both(&LinkDiagram::unknot()).to_string(), "q^-1 + q^1");
        let u2 = both(&LinkDiagram::unlink(2));
        assert_eq!(u2.dim(0, 0), 2);
        assert_eq!(u2.total_dim(), 4);
        let kink = LinkDiagram::new(
            vec![crate::diagram::Crossing {
                edges: [1, 1, 2, 2],
                sign: 1,
            }],
            0,
        )
        .unwrap();
        assert_eq!(both(&kink), both(&LinkDiagram::unknot()));
    }

    #[test]
    fn hopf_and_trefoil() {
        let hopf = both(&torus2_diagram(2));
        assert_eq!(hopf.to_string(), "1 + q^2 + q^4*t^2 + q^6*t^2");
        let tref = both(&torus2_diagram(3));
        assert_eq!(tref.to_string(), "q^1 + q^3 + q^5*t^2 + q^9*t^3");
    }

    #[test]
    fn engines_agree_on_pretzels() {
        for (a, b, c) in [(-2, 3, 3), (-2, 2, 4), (-3, 3, 3), (-2, 3, 5), (-3, 3, 4)] {
            for p in crate::diagram::admissible_patterns(a, b, c) {
                both(&pretzel_diagram(a, b, c, p).unwrap());
            }
        }
    }

    #[test]
    fn mirror_symmetry() {
        let p = crate::diagram::admissible_patterns(-2, 3, 5)[0];
        let d = pretzel_diagram(-2, 3, 5, p).unwrap();
        assert_eq!(
            homology(&d.mirror()).unwrap(),
            homology(&d).unwrap().mirror()
        );
    }
}
