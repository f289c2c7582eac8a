from dataclasses import dataclass, field


@dataclass
class RunReport:
    """Counts and warnings gathered over one pipeline run."""

    pathways_rendered: int = 0
    profile_figures_rendered: int = 0
    tests_performed: dict[str, int] = field(default_factory=dict)
    significant: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    duration_seconds: float = 0.0

    def record_family(self, family: str, tested: int, significant: int) -> None:
        self.tests_performed[family] = self.tests_performed.get(family, 0) + tested
        self.significant[family] = self.significant.get(family, 0) + significant

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    @property
    def total_tests(self) -> int:
        return sum(self.tests_performed.values())
