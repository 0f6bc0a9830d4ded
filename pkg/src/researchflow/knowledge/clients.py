"""Academic database clients.

Each client exposes search(text, ...) -> [DocumentRecord]. The fixture
client replays recorded results for deterministic tests; the HTTP clients
cover Semantic Scholar, OpenAlex, and PubMed with the same surface.
"""

from __future__ import annotations

from typing import Protocol

import httpx

from researchflow.knowledge.records import DocumentRecord


class DatabaseClient(Protocol):
    name: str

    def search(self, text: str, year_range=None, limit: int = 20
               ) -> list[DocumentRecord]: ...


class FixtureClient:
    """Replays canned records; `results` maps nothing — every query gets
    the same recorded list, mirroring a recorded HTTP cassette."""

    def __init__(self, name: str, records: list[dict],
                 fail: bool = False):
        self.name = name
        self._records = records
        self.fail = fail

    def search(self, text: str, year_range=None, limit: int = 20):
        if self.fail:
            raise ConnectionError(f"{self.name} fixture marked failing")
        out = []
        for rec in self._records[:limit]:
            out.append(DocumentRecord(
                canonical_id=rec["canonical_id"], source_db=self.name,
                title=rec.get("title", ""), abstract=rec.get("abstract", ""),
                metadata=rec.get("metadata", {})))
        return out


class SemanticScholarClient:
    name = "semantic_scholar"
    BASE = "https://api.semanticscholar.org/graph/v1/paper/search"

    def __init__(self, client: httpx.Client | None = None):
        self._http = client or httpx.Client(timeout=20)

    def search(self, text: str, year_range=None, limit: int = 20):
        params = {"query": text, "limit": limit,
                  "fields": "title,abstract,externalIds,year"}
        if year_range:
            params["year"] = f"{year_range[0]}-{year_range[1]}"
        resp = self._http.get(self.BASE, params=params)
        resp.raise_for_status()
        out = []
        for item in resp.json().get("data", []):
            doi = (item.get("externalIds") or {}).get("DOI") or item.get("paperId")
            out.append(DocumentRecord(
                canonical_id=str(doi).lower(), source_db=self.name,
                title=item.get("title") or "",
                abstract=item.get("abstract") or "",
                metadata={"year": item.get("year")}))
        return out


class OpenAlexClient:
    name = "openalex"
    BASE = "https://api.openalex.org/works"

    def __init__(self, client: httpx.Client | None = None):
        self._http = client or httpx.Client(timeout=20)

    def search(self, text: str, year_range=None, limit: int = 20):
        params = {"search": text, "per-page": limit}
        resp = self._http.get(self.BASE, params=params)
        resp.raise_for_status()
        out = []
        for item in resp.json().get("results", []):
            doi = (item.get("doi") or item.get("id") or "").replace(
                "https://doi.org/", "")
            out.append(DocumentRecord(
                canonical_id=doi.lower(), source_db=self.name,
                title=item.get("display_name") or "",
                metadata={"year": item.get("publication_year")}))
        return out


class PubMedClient:
    name = "pubmed"
    BASE = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/esearch.fcgi"

    def __init__(self, client: httpx.Client | None = None):
        self._http = client or httpx.Client(timeout=20)

    def search(self, text: str, year_range=None, limit: int = 20):
        params = {"db": "pubmed", "term": text, "retmax": limit,
                  "retmode": "json"}
        resp = self._http.get(self.BASE, params=params)
        resp.raise_for_status()
        ids = resp.json().get("esearchresult", {}).get("idlist", [])
        return [DocumentRecord(canonical_id=f"pmid:{pmid}",
                               source_db=self.name, title="")
                for pmid in ids]
