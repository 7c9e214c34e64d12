//! Hybrid ODMR of the boron-vacancy triplet, reduced to hyperfine multiplets.

use std::path::Path;

use defectoscope::io::parse_spin_system;
use defectoscope::spin::{hybrid_spectrum, multiplets};

fn main() -> defectoscope::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/vb_rbn.toml");
    for (field, gap) in [("[0.0, 0.0, 9.0]", 20.0), ("[0.0, 0.0, 0.0]", 4.0)] {
        let file = parse_spin_system(&path, &[("sweep.B_mT".into(), field.into())])?;
        let mut sweep = file.sweep.expect("config has a sweep");
        sweep.temperature_k = None;
        let r = hybrid_spectrum(&file.system, &sweep)?;
        println!("B = {field} mT, {} core lines, FWHM {:.2} MHz", r.core.entries.len(), r.fwhm_mhz);
        for m in multiplets(&r.core, gap) {
            let ratios: Vec<String> = m.ratios(27.0).iter().map(|x| format!("{x:.2}")).collect();
            println!(
                "  branch {:?}: center {:.2} MHz, {} lines, spacing {:.2} MHz, ratios {}",
                m.manifold,
                m.center_mhz,
                m.groups.len(),
                m.spacing_mhz().unwrap_or(f64::NAN),
                ratios.join(":")
            );
        }
    }
    Ok(())
}
