//! The three-party game: best classical strategy against the quantum one.

use jordan_bell::lhv::{
    game_classical_value, game_measurements, game_quantum_simulated, game_quantum_value,
    GameStrategy,
};
use jordan_bell::states::{psi3, psi3_prime, violation_of, x_star_n3, MeasurementSet};

fn main() -> jordan_bell::Result<()> {
    let c = game_classical_value();
    println!(
        "classical value {} from {} strategies",
        c.value, c.strategies
    );
    println!(
        "always reply 1  {}",
        GameStrategy::constant(1).win_probability()
    );

    let meas = game_measurements(x_star_n3())?;
    let delta = violation_of(&psi3(), &meas)?;
    println!("optimal state: delta {delta:.9}");
    println!("  formula    {:.12}", game_quantum_value(delta));
    println!(
        "  simulated  {:.12}",
        game_quantum_simulated(&psi3(), &meas)?
    );

    let zx = MeasurementSet::z_x(3);
    let delta = violation_of(&psi3_prime(), &zx)?;
    println!("equal-magnitude state: delta {delta:.9}");
    println!("  formula    {:.12}", game_quantum_value(delta));
    println!(
        "  simulated  {:.12}",
        game_quantum_simulated(&psi3_prime(), &zx)?
    );
    Ok(())
}
