// Building, printing and parsing CPE 2.3 identifiers for a release.
//
// Run with `cargo run --example cpe_identifier`.

use safeforecast::cpe::{Component, CpeField};
use safeforecast::{cpe_for, CpeIdentifier};

fn main() -> safeforecast::Result<()> {
    let release = cpe_for("example_vendor", "safeforecast", env!("CARGO_PKG_VERSION"))?
        .with_target_sw("rust")?;
    println!("{release}");

    let any_version = cpe_for("example_vendor", "safeforecast", "*")?;
    println!("{any_version}");

    let odd = cpe_for("acme inc", "load*cast", "2.0!")?.with(CpeField::Language, "de")?;
    let text = odd.to_string();
    println!("{text}");
    let back: CpeIdentifier = text.parse()?;
    println!("round trip equal: {}", back == odd);
    println!("product value: {:?}", back.product);
    assert_eq!(back.get(CpeField::Language), &Component::Value("de".into()));

    for bad in ["cpe:2.3:a:v:p:1", "cpe:2.3:a:v:p:1:*:*:*:*:*:*:\\a"] {
        if let Err(e) = CpeIdentifier::parse(bad) {
            println!("rejected {bad:?}: {e}");
        }
    }
    if let Err(e) = cpe_for("vendor", "a:b", "1") {
        println!("rejected product \"a:b\": {e}");
    }
    Ok(())
}
