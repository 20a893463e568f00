EnsembleStats = OccupationMeasure = log_growth_rate = lyapunov_estimate = occupation = time_average = None
