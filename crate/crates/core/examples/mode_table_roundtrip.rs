use defectoscope::io::{parse_mode_table_str, serialize_mode_table};
use defectoscope::lineshape::{mean_phonon_energy, PhononMode, Symmetry};

fn main() -> defectoscope::Result<()> {
    let modes = vec![
        PhononMode::new(0, 25.0, 2.0, Symmetry::E)?,
        PhononMode::new(1, 62.5, 0.5, Symmetry::A1)?,
    ];
    let text = serialize_mode_table(&modes);
    print!("{text}");
    let back = parse_mode_table_str(&text, "<memory>")?;
    assert_eq!(back, modes);
    println!("mean phonon energy {:.2} meV", mean_phonon_energy(&back)?);
    Ok(())
}
