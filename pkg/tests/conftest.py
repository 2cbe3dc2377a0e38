from hypothesis import HealthCheck, settings

# Tree evaluation inside property tests can be slow per example on a busy
# machine; the deadline only adds flakiness here.
settings.register_profile(
    "evalbench", deadline=None, suppress_health_check=(HealthCheck.too_slow,)
)
settings.load_profile("evalbench")
