//! Generate and inspect oracle files (the JSON table format).

use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use hidden_shift_core::influence::{influence_profile, is_bent, periodic_witness};
use hidden_shift_core::group::GroupSpec;
use hidden_shift_core::oracle::FunctionTable;
use hidden_shift_core::seed;

use crate::bent::random_mm_bent;
use crate::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Random,
    NonPeriodic,
    Bent,
}

#[derive(Debug, Clone, clap::Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long = "s-size")]
    pub s_size: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = GeneratorKind::Random)]
    pub generator: GeneratorKind,
    /// Destination file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, clap::Args)]
pub struct InspectArgs {
    /// Oracle file to read.
    #[arg(long)]
    pub input: PathBuf,
    /// Optional CSV export of the influence profile
    /// (v_index, gamma_numerator, gamma_denominator).
    #[arg(long)]
    pub profile_csv: Option<PathBuf>,
}

pub fn generate(args: &GenerateArgs) -> Result<(), ConfigError> {
    let spec = GroupSpec::new(args.q, args.n)?;
    if spec.order() > crate::MAX_ORDER {
        return Err(ConfigError(format!(
            "group order {} exceeds the guard {}",
            spec.order(),
            crate::MAX_ORDER
        )));
    }
    let table = match args.generator {
        GeneratorKind::Random => FunctionTable::random(spec, args.s_size, args.seed)?,
        GeneratorKind::NonPeriodic => {
            FunctionTable::random_non_periodic(spec, args.s_size, args.seed)?
        }
        GeneratorKind::Bent => {
            if args.q != 2 || !args.n.is_multiple_of(2) || args.s_size != 2 {
                return Err(ConfigError(
                    "bent generation requires q = 2, even n, and s-size = 2".into(),
                ));
            }
            let mut rng = seed::rng(args.seed);
            random_mm_bent(args.n / 2, &mut rng)?
        }
    };
    fs::write(&args.out, table.to_json() + "\n")?;
    println!("wrote oracle to {}", args.out.display());
    Ok(())
}

pub fn inspect(args: &InspectArgs) -> Result<(), ConfigError> {
    let text = fs::read_to_string(&args.input)?;
    let table = FunctionTable::from_json(&text)?;
    let spec = *table.spec();
    println!(
        "group Z_{}^{} (order {}), range size {}",
        spec.q(),
        spec.n(),
        spec.order(),
        table.range_size()
    );
    if let Some(meta) = table.meta() {
        if let Some(generator) = &meta.generator {
            println!("generator: {generator}");
        }
        if let Some(seed_value) = meta.seed {
            println!("seed: {seed_value}");
        }
    }
    match table.first_collision() {
        None => println!("injective: yes"),
        Some((x, y)) => println!("injective: no (first collision at indices {x}, {y})"),
    }
    match periodic_witness(&table) {
        None => println!("periodic: no"),
        Some(v) => println!("periodic: yes (witness {v})"),
    }
    // the full profile costs |G|^2 reads; skip it for very large tables
    // unless the caller asked for the CSV export
    if spec.order() <= 1 << 12 || args.profile_csv.is_some() {
        let profile = influence_profile(&table);
        println!("gamma_min: {}", profile.gamma_min());
        if let Some(path) = &args.profile_csv {
            let file = fs::File::create(path)?;
            profile.write_csv(file)?;
            println!("wrote influence profile to {}", path.display());
        }
    } else {
        println!("gamma_min: skipped (order > 4096; pass --profile-csv to force)");
    }
    if spec.q() == 2 && table.range_size() == 2 {
        println!("bent: {}", is_bent(&table)?);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_and_inspect_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("oracle.json");
        generate(&GenerateArgs {
            q: 2,
            n: 4,
            s_size: 2,
            seed: 11,
            generator: GeneratorKind::Bent,
            out: path.clone(),
        })
        .unwrap();
        let table = FunctionTable::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
        assert!(is_bent(&table).unwrap());

        let csv_path = dir.path().join("profile.csv");
        inspect(&InspectArgs {
            input: path,
            profile_csv: Some(csv_path.clone()),
        })
        .unwrap();
        let text = fs::read_to_string(csv_path).unwrap();
        assert!(text.starts_with("v_index,gamma_numerator,gamma_denominator"));
    }
}
