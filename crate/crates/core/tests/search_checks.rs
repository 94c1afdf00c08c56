use pagecert::charbounds::{ModulusRange, Parity};
use pagecert::criterion::Status;
use pagecert::search::{
    default_c_step, default_x_grid, emit_table, find_best, format_q, parse_q, parse_table,
    published_table, verify_row, verify_row_with, verify_table, ParityEntry, SearchOptions,
    TableError, TableFormat, TableRow, ODD_TABLE_START,
};

#[test]
fn published_table_has_the_printed_shape() {
    let rows = published_table();
    assert_eq!(rows.len(), 22);
    assert_eq!(rows.iter().filter(|r| r.even.is_some()).count(), 22);
    assert_eq!(rows.iter().filter(|r| r.odd.is_some()).count(), 13);
    assert_eq!(rows[0].q_lo, 400_000);
    assert_eq!(rows[21].q_hi, 910_000_000_000_000_000_000_000_000_000_000);
    for pair in rows.windows(2) {
        assert_eq!(pair[0].q_hi, pair[1].q_lo);
    }
    // odd entries begin exactly where the odd half of the table starts
    for row in rows {
        assert_eq!(row.odd.is_some(), row.q_hi > ODD_TABLE_START);
    }
}

#[test]
fn modulus_formatting_round_trips() {
    let cases: [(u128, &str); 9] = [
        (400_000, "4e5"),
        (150_000_000, "1.5e8"),
        (13_000_000, "1.3e7"),
        (6_100_000, "6.1e6"),
        (2_100_000_000_000_000_000, "2.1e18"),
        (4_400_000_000_000_000_000_000, "4.4e21"),
        (100_000_000_000_000_000_000_000_000_000_000, "1e32"),
        (910_000_000_000_000_000_000_000_000_000_000, "9.1e32"),
        (123, "123"),
    ];
    for (n, text) in cases {
        assert_eq!(format_q(n), text);
        assert_eq!(parse_q(text).unwrap(), n);
    }
    for row in published_table() {
        assert_eq!(parse_q(&format_q(row.q_lo)).unwrap(), row.q_lo);
        assert_eq!(parse_q(&format_q(row.q_hi)).unwrap(), row.q_hi);
    }
    assert_eq!(parse_q("400000").unwrap(), 400_000);
    assert!(parse_q("4.e5").is_err() || parse_q("4.e5").unwrap() == 400_000);
    assert!(parse_q("").is_err());
    assert!(parse_q("e5").is_err());
    assert!(parse_q("4e-2").is_err());
    assert!(parse_q("4x5").is_err());
}

#[test]
fn csv_emission_matches_the_printed_layout() {
    let text = emit_table(published_table(), TableFormat::Csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q0,q1,c_even,x_even,c_odd,x_odd");
    assert_eq!(lines.next().unwrap(), "4e5,7e5,1.011,5.54,--,--");
    let all: Vec<&str> = text.lines().collect();
    assert_eq!(all.len(), 23);
    assert_eq!(all[10], "1.5e8,6.2e8,1.055,7.75,1.021,8.00");
    assert_eq!(all[22], "1e32,9.1e32,1.495,21.40,1.480,21.61");
}

#[test]
fn emission_round_trips_in_both_formats() {
    for format in [TableFormat::Csv, TableFormat::Json] {
        let text = emit_table(published_table(), format).unwrap();
        let back = parse_table(&text, format).unwrap();
        assert_eq!(back.as_slice(), published_table());
    }
}

#[test]
fn empty_table_emits_header_only() {
    let text = emit_table(&[], TableFormat::Csv).unwrap();
    assert_eq!(text, "q0,q1,c_even,x_even,c_odd,x_odd\n");
    assert_eq!(parse_table(&text, TableFormat::Csv).unwrap(), vec![]);
}

#[test]
fn emission_rejects_malformed_tables() {
    let mut gapped: Vec<TableRow> = published_table().to_vec();
    gapped[1].q_lo = 700_001;
    assert_eq!(
        emit_table(&gapped, TableFormat::Csv),
        Err(TableError::Gap { index: 0 })
    );

    let mut nonmonotone: Vec<TableRow> = published_table().to_vec();
    nonmonotone[3].even = Some(ParityEntry {
        c_milli: 1000,
        log10_x_centi: 608,
    });
    assert!(matches!(
        emit_table(&nonmonotone, TableFormat::Csv),
        Err(TableError::Shape { index: 3 })
    ));

    let mut premature_odd: Vec<TableRow> = published_table().to_vec();
    premature_odd[2].odd = Some(ParityEntry {
        c_milli: 1000,
        log10_x_centi: 500,
    });
    assert!(matches!(
        emit_table(&premature_odd, TableFormat::Csv),
        Err(TableError::Shape { index: 2 })
    ));
}

#[test]
fn parser_rejects_damaged_rows() {
    let good = emit_table(published_table(), TableFormat::Csv).unwrap();
    let half_absent = good.replace("1.011,5.54,--,--", "1.011,--,--,--");
    assert!(matches!(
        parse_table(&half_absent, TableFormat::Csv),
        Err(TableError::Parse(_))
    ));
    let bad_header = good.replace("q0,q1", "qa,qb");
    assert!(matches!(
        parse_table(&bad_header, TableFormat::Csv),
        Err(TableError::Parse(_))
    ));
    let short_row = good.replace("4e5,7e5,1.011,5.54,--,--", "4e5,7e5,1.011,5.54,--");
    assert!(matches!(
        parse_table(&short_row, TableFormat::Csv),
        Err(TableError::Parse(_))
    ));
}

#[test]
fn verify_row_certifies_a_mid_table_even_row() {
    let row = published_table()[10];
    assert_eq!(row.q_lo, 620_000_000);
    let cert = verify_row(&row, Parity::Even).unwrap();
    assert_eq!(cert.status, Status::Certified);
    assert_eq!(cert.reduced_from, None);
    assert!(cert.f_star.hi < 0.0);
}

#[test]
fn verify_row_certifies_the_last_odd_row() {
    let row = published_table()[21];
    let cert = verify_row(&row, Parity::Odd).unwrap();
    assert_eq!(cert.status, Status::Certified);
    assert_eq!(cert.reduced_from, None);
}

#[test]
fn verify_row_rejects_an_inflated_constant() {
    let mut row = published_table()[10];
    let e = row.even.unwrap();
    row.even = Some(ParityEntry {
        c_milli: e.c_milli + 200,
        log10_x_centi: e.log10_x_centi,
    });
    match verify_row(&row, Parity::Even) {
        Ok(cert) => assert_ne!(cert.status, Status::Certified),
        // +0.2 pushes the witness past the side condition allowance
        Err(TableError::IrreducibleRow { .. }) => {}
        Err(other) => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn verify_row_requires_the_requested_parity() {
    let row = published_table()[0];
    assert_eq!(
        verify_row(&row, Parity::Odd).unwrap_err(),
        TableError::MissingParity
    );
}

#[test]
fn printed_rounding_slack_is_absorbed_by_tiny_reductions() {
    // four printed (c, x) pairs overshoot log q₀/c by under 0.1%; the
    // verifier lowers c one thousandth and records the original
    let cases = [
        (3usize, Parity::Even, 1025u32, 1024u32),
        (9, Parity::Even, 1055, 1054),
        (20, Parity::Even, 1445, 1444),
        (13, Parity::Odd, 1069, 1068),
    ];
    for (idx, parity, printed, reduced) in cases {
        let row = published_table()[idx];
        assert_eq!(row.entry(parity).unwrap().c_milli, printed);
        let cert = verify_row(&row, parity).unwrap();
        assert_eq!(cert.status, Status::Certified, "row {idx} {parity:?}");
        assert_eq!(cert.reduced_from, Some(printed));
        assert_eq!(cert.config.c_milli, reduced);
    }
}

#[test]
fn verify_table_covers_every_odd_entry() {
    let opts = SearchOptions::default();
    let results = verify_table(published_table(), Parity::Odd, &opts);
    assert_eq!(results.len(), 13);
    assert_eq!(results[0].0, 9);
    for (idx, res) in &results {
        let cert = res.as_ref().unwrap();
        assert_eq!(cert.status, Status::Certified, "row {idx}");
    }
}

#[test]
fn default_grid_anchors_at_the_side_condition_boundary() {
    let range = ModulusRange::new(400_000, 700_000, Parity::Even).unwrap();
    let grid = default_x_grid(&range, 1011);
    assert_eq!(grid.len(), 51);
    // log₁₀(4·10⁵)/1.011 = 5.5411..., floored to hundredths
    assert_eq!(grid[0], 554);
    assert_eq!(grid[1], 552);
    assert_eq!(grid[50], 454);
    assert!(grid.windows(2).all(|w| w[0] > w[1]));

    assert_eq!(default_c_step(&range), 1);
    let high = ModulusRange::new(
        2_100_000_000_000_000_000,
        4_400_000_000_000_000_000_000,
        Parity::Even,
    )
    .unwrap();
    assert_eq!(default_c_step(&high), 5);
}

#[test]
fn find_best_beats_the_published_first_row() {
    let range = ModulusRange::new(400_000, 700_000, Parity::Even).unwrap();
    let grid = default_x_grid(&range, 1000);
    let out = find_best(range, 1000, 1, &grid).expect("first row must certify at c = 1.000");
    assert!(
        out.c_milli >= 1011,
        "search stopped at c = {}/1000",
        out.c_milli
    );
    assert_eq!(out.certificate.status, Status::Certified);
    assert_eq!(out.certificate.config.c_milli, out.c_milli);
    assert_eq!(out.certificate.config.log10_x_centi, out.log10_x_centi);
    assert!(grid.contains(&out.log10_x_centi));

    // bit for bit reproducible
    let again = find_best(range, 1000, 1, &grid).unwrap();
    assert_eq!(again.c_milli, out.c_milli);
    assert_eq!(again.log10_x_centi, out.log10_x_centi);
    assert_eq!(again.certificate.f_star.lo, out.certificate.f_star.lo);
    assert_eq!(again.certificate.f_star.hi, out.certificate.f_star.hi);
}

#[test]
fn find_best_returns_none_when_the_start_fails() {
    let range = ModulusRange::new(400_000, 700_000, Parity::Even).unwrap();
    // a witness grid excluded entirely by the side condition at c = 3
    assert!(find_best(range, 3000, 1, &[600, 580]).is_none());
}

#[test]
fn find_best_respects_the_pomerance_toggle() {
    let range = ModulusRange::new(400_000, 700_000, Parity::Even).unwrap();
    let grid = default_x_grid(&range, 1000);
    let plain = find_best(range, 1000, 1, &grid).unwrap();
    let opts = SearchOptions {
        pomerance: true,
        ..SearchOptions::default()
    };
    let halved =
        pagecert::search::find_best_with(range, 1000, 1, &grid, &opts).unwrap();
    assert!(
        halved.c_milli >= plain.c_milli,
        "halving the character sum constant cannot hurt: {} vs {}",
        halved.c_milli,
        plain.c_milli
    );
}

#[test]
fn verify_row_options_feed_through() {
    let row = published_table()[0];
    let opts = SearchOptions {
        tau_floor_exponent: -5.0,
        ..SearchOptions::default()
    };
    let cert = verify_row_with(&row, Parity::Even, &opts).unwrap();
    assert_eq!(cert.status, Status::Certified);
    assert_eq!(cert.config.tau_floor_exponent, -5.0);
}
