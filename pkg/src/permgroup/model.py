from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class Permutation(BaseModel):
    """Element of S_n in one-line notation: images[k] = w(k + 1)."""

    model_config = ConfigDict(frozen=True)

    images: tuple[int, ...]

    @field_validator("images")
    @classmethod
    def must_be_bijection(cls, images: tuple[int, ...]) -> tuple[int, ...]:
        if not images:
            raise ValueError("A permutation needs at least one point")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{list(images)} is not a bijection of 1..{len(images)}")
        return images

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def inverse(self) -> "Permutation":
        inverse = [0] * self.n
        for position, image in enumerate(self.images, start=1):
            inverse[image - 1] = position
        return Permutation(images=tuple(inverse))

    def is_identity(self) -> bool:
        return all(image == k for k, image in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return "[" + ",".join(str(i) for i in self.images) + "]"


class ReducedWord(BaseModel):
    """A minimal decomposition s_{i1} ... s_{il} of `target` (right multiplication)."""

    model_config = ConfigDict(frozen=True)

    word: tuple[int, ...]
    target: Permutation

    @model_validator(mode="after")
    def must_be_minimal_decomposition(self) -> "ReducedWord":
        n = self.target.n
        images = list(range(1, n + 1))
        for i in self.word:
            if not 1 <= i < n:
                raise ValueError(f"Index {i} out of range for S_{n}")
            images[i - 1], images[i] = images[i], images[i - 1]
        if tuple(images) != self.target.images:
            raise ValueError(f"{self.word} does not multiply to {self.target}")
        inversions = sum(
            1
            for a in range(n)
            for b in range(a + 1, n)
            if self.target.images[a] > self.target.images[b]
        )
        if len(self.word) != inversions:
            raise ValueError(f"{self.word} is not minimal for {self.target}")
        return self

    def __str__(self) -> str:
        return ",".join(str(i) for i in self.word)


class RankTable(BaseModel):
    """r(i, j) = |{k <= j : w(k) <= i}|, stored 0-indexed, read 1-indexed."""

    model_config = ConfigDict(frozen=True)

    n: int
    r: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def must_be_rank_table(self) -> "RankTable":
        if len(self.r) != self.n or any(len(row) != self.n for row in self.r):
            raise ValueError(f"Rank table must be {self.n}x{self.n}")
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                value = self.r[i - 1][j - 1]
                if not 0 <= value <= min(i, j):
                    raise ValueError(f"r({i},{j}) = {value} out of range")
            if self.r[self.n - 1][i - 1] != i or self.r[i - 1][self.n - 1] != i:
                raise ValueError("Border values must satisfy r(n,j) = j and r(i,n) = i")
        return self

    def at(self, i: int, j: int) -> int:
        return self.r[i - 1][j - 1]


class PermutationInfo(BaseModel):
    permutation: str
    length: int
    reduced_words: list[str]
    rank_table: list[list[int]]
    essential_set: list[tuple[int, int]]
