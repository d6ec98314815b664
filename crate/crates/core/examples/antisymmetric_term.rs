//! The part of the nonequilibrium pressure that changes sign when the plate
//! temperatures are swapped, split into propagating and evanescent waves.

use casimir_neq::cli::{preset_cannex, ModelChoice};
use casimir_neq::{delta_p_neq, QuadratureSettings};

fn main() -> casimir_neq::Result<()> {
    let model = match std::env::args().nth(1).as_deref() {
        Some(m) => m.parse()?,
        None => ModelChoice::Drude,
    };
    let settings = QuadratureSettings::default().with_rel_tol(1e-5);
    let (config, _) = preset_cannex(model)?;
    println!("model {}", model.name());
    println!("a_m,delta_neq_Pa,propagating_Pa,evanescent_Pa,error_Pa,swapped_Pa");
    for a in [4e-6, 6e-6, 8e-6] {
        let c = config.with_separation(a);
        let r = delta_p_neq(&c, &settings)?;
        let swapped = delta_p_neq(&c.swapped_temperatures(), &settings)?;
        println!(
            "{a:.3e},{:.12e},{:.12e},{:.12e},{:.3e},{:.12e}",
            r.value, r.propagating, r.evanescent, r.error_estimate, swapped.value
        );
    }
    Ok(())
}
