SimConfig = Trajectory = drift = simulate_ensemble = simulate_ode = simulate_path = step_log_em = None
