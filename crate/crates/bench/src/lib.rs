//! Shared problem builders for the benchmark suite.

use slabsn::{
    build_mesh, BoundaryKind, BoundarySpec, MaterialRegion, Mesh,
};

/// Homogeneous measurement slab: unit total cross section, scattering ratio
/// `c`, unit source, reflective left / vacuum right, `cells` cells of width
/// `sigma_t_h`.
pub fn measurement_slab(c: f64, sigma_t_h: f64, cells: usize) -> Mesh {
    let regions = [MaterialRegion {
        width: cells as f64 * sigma_t_h,
        sigma_t: 1.0,
        sigma_s: c,
        q: 1.0,
    }];
    build_mesh(
        &regions,
        BoundarySpec {
            left: BoundaryKind::Reflective,
            right: BoundaryKind::Vacuum,
        },
        sigma_t_h,
    )
    .expect("benchmark mesh must build")
}

/// Three-layer consistency slab: 30 unit cells with a high-scattering core.
pub fn layered_slab() -> Mesh {
    let regions = [
        MaterialRegion {
            width: 10.0,
            sigma_t: 1.0,
            sigma_s: 0.9,
            q: 1.0,
        },
        MaterialRegion {
            width: 10.0,
            sigma_t: 1.0,
            sigma_s: 0.99,
            q: 1.0,
        },
        MaterialRegion {
            width: 10.0,
            sigma_t: 1.0,
            sigma_s: 0.9,
            q: 1.0,
        },
    ];
    build_mesh(
        &regions,
        BoundarySpec {
            left: BoundaryKind::Reflective,
            right: BoundaryKind::Vacuum,
        },
        1.0,
    )
    .expect("benchmark mesh must build")
}
