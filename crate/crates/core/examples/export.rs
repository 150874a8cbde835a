//! Write one result as JSON, DOT and GeoJSON.

use altroute::io::{export, generate_grid, Format, MethodEcho};
use altroute::{run_method, MethodSpec, ObjectiveConfig};

fn main() {
    let g = generate_grid(12, 12, 8, 3).unwrap();
    let spec = MethodSpec::default_for("plateau").unwrap();
    let out = run_method(&g, 0, 143, &spec, &ObjectiveConfig::default()).unwrap();
    let echo = MethodEcho { name: spec.name().into(), config: serde_json::to_value(&spec).unwrap() };

    let dir = std::env::temp_dir().join("altroute-export");
    std::fs::create_dir_all(&dir).unwrap();
    for (format, ext) in [(Format::Json, "json"), (Format::Dot, "dot"), (Format::Geojson, "geojson")] {
        let path = dir.join(format!("plateau.{ext}"));
        export(&out.ag, &g, Some(&out.evaluation.report), Some(echo.clone()), format, &path).unwrap();
        println!("wrote {}", path.display());
    }
}
