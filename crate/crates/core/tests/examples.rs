macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run_example().expect("example runs");
        }
    };
}

example!(profile_shooting);
example!(trial_optimization);
example!(fluctuation_potential);
example!(bound_spectrum);
example!(mode_asymptotics);
example!(continuum_probe);
example!(verify_report);
