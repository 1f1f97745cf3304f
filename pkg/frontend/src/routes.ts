// Every view is addressable through the URL fragment, so any screen the
// app can show is linkable and reload-safe.

export type Criterion = "works" | "authors" | "institutions" | "venues";
export type SortKey = "relevance" | "title" | "date" | "citations";
export type WorkTab = "details" | "citations" | "similar" | "discussion";
export type AuthorTab = "works" | "coauthors" | "focus";

export type ViewRoute =
  | { view: "home" }
  | { view: "search"; criterion: Criterion; query: string; page: number; sort: SortKey }
  | { view: "work"; id: string; tab: WorkTab }
  | { view: "author"; id: string; tab: AuthorTab }
  | { view: "institution"; id: string }
  | { view: "venue"; id: string }
  | { view: "path"; from: string; to: string }
  | { view: "login" };

const CRITERIA: Criterion[] = ["works", "authors", "institutions", "venues"];
const SORTS: SortKey[] = ["relevance", "title", "date", "citations"];
const WORK_TABS: WorkTab[] = ["details", "citations", "similar", "discussion"];
const AUTHOR_TABS: AuthorTab[] = ["works", "coauthors", "focus"];

export function serializeRoute(route: ViewRoute): string {
  switch (route.view) {
    case "home":
      return "#/";
    case "search": {
      const params = new URLSearchParams({
        q: route.query,
        page: String(route.page),
        sort: route.sort,
      });
      return `#/search/${route.criterion}?${params}`;
    }
    case "work":
      return `#/works/${encodeURIComponent(route.id)}/${route.tab}`;
    case "author":
      return `#/authors/${encodeURIComponent(route.id)}/${route.tab}`;
    case "institution":
      return `#/institutions/${encodeURIComponent(route.id)}`;
    case "venue":
      return `#/venues/${encodeURIComponent(route.id)}`;
    case "path": {
      const params = new URLSearchParams({ from: route.from, to: route.to });
      return `#/path?${params}`;
    }
    case "login":
      return "#/login";
  }
}

function oneOf<T extends string>(value: string | undefined, allowed: T[]): T | null {
  return allowed.includes(value as T) ? (value as T) : null;
}

/** Parse a URL fragment back into a route; anything unrecognized is home. */
export function parseRoute(hash: string): ViewRoute {
  const fragment = hash.startsWith("#") ? hash.slice(1) : hash;
  const [pathPart, queryPart] = splitOnce(fragment, "?");
  const params = new URLSearchParams(queryPart ?? "");
  const segments = pathPart.split("/").filter((s) => s.length > 0).map(decodeURIComponent);

  if (segments.length === 0) return { view: "home" };

  if (segments[0] === "search" && segments.length === 2) {
    const criterion = oneOf(segments[1], CRITERIA);
    if (criterion) {
      const page = Number.parseInt(params.get("page") ?? "1", 10);
      return {
        view: "search",
        criterion,
        query: params.get("q") ?? "",
        page: Number.isFinite(page) && page >= 1 ? page : 1,
        sort: oneOf(params.get("sort") ?? "relevance", SORTS) ?? "relevance",
      };
    }
  }
  if (segments[0] === "works" && segments.length === 3) {
    const tab = oneOf(segments[2], WORK_TABS);
    if (tab) return { view: "work", id: segments[1], tab };
  }
  if (segments[0] === "authors" && segments.length === 3) {
    const tab = oneOf(segments[2], AUTHOR_TABS);
    if (tab) return { view: "author", id: segments[1], tab };
  }
  if (segments[0] === "institutions" && segments.length === 2) {
    return { view: "institution", id: segments[1] };
  }
  if (segments[0] === "venues" && segments.length === 2) {
    return { view: "venue", id: segments[1] };
  }
  if (segments[0] === "path" && segments.length === 1) {
    const from = params.get("from");
    const to = params.get("to");
    if (from && to) return { view: "path", from, to };
  }
  if (segments[0] === "login" && segments.length === 1) {
    return { view: "login" };
  }
  return { view: "home" };
}

function splitOnce(text: string, separator: string): [string, string | undefined] {
  const index = text.indexOf(separator);
  if (index < 0) return [text, undefined];
  return [text.slice(0, index), text.slice(index + 1)];
}
