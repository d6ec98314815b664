//! Reflection coefficients of a gold film on silicon on both frequency axes.

use casimir_neq::reflection::{plate_reflection_imag, plate_reflection_real, ImagAxisPoint, RealAxisPoint};
use casimir_neq::{DielectricModel, LayeredPlate, Polarization};

fn main() -> casimir_neq::Result<()> {
    let a = 5e-6;
    println!("Matsubara axis, ζ = 1");
    println!("thickness_m,y,r_TM,r_TE");
    for d in [10e-9, 50e-9, 200e-9, 1e-6] {
        let plate = LayeredPlate::new(DielectricModel::gold_drude(), d, DielectricModel::constant(11.66));
        for y in [1.0, 3.0, 10.0] {
            let p = ImagAxisPoint::new(1.0, y, a)?;
            let tm = plate_reflection_imag(&plate, &p, Polarization::TM)?;
            let te = plate_reflection_imag(&plate, &p, Polarization::TE)?;
            println!("{d:.3e},{y:.1},{tm:.12e},{te:.12e}");
        }
    }

    println!("\nreal axis, u = 20: |R|² for propagating (t < 1) and evanescent (t > 1) waves");
    let plate = LayeredPlate::new(DielectricModel::gold_drude(), 200e-9, DielectricModel::constant(11.66));
    for t in [0.0, 0.5, 0.99, 1.01, 2.0, 5.0] {
        let p = RealAxisPoint::new(20.0, t, a)?;
        let tm = plate_reflection_real(&plate, &p, Polarization::TM)?;
        let te = plate_reflection_real(&plate, &p, Polarization::TE)?;
        println!("t = {t:4.2}  TM {:.9}  TE {:.9}", tm.norm_sqr(), te.norm_sqr());
    }
    Ok(())
}
