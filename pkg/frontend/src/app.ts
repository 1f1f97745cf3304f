// Controller: hash routing, data loading, event delegation. All rendering
// is delegated to the pure functions in render.ts; all data comes from the
// ApiClient. One navigation sequence number keeps stale responses from
// painting over newer views.

import { ApiClient, ApiError } from "./api.js";
import type { SortKey, ViewRoute } from "./routes.js";
import { parseRoute, serializeRoute } from "./routes.js";
import * as render from "./render.js";
import { AppState, LoginFlow } from "./state.js";

export class App {
  private route: ViewRoute = { view: "home" };
  private readonly login: LoginFlow;
  private worksSort: SortKey = "citations";

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly state: AppState,
  ) {
    this.login = new LoginFlow(api, state);
  }

  start(): void {
    window.addEventListener("hashchange", () => {
      void this.navigate(parseRoute(window.location.hash));
    });
    this.root.addEventListener("submit", (event) => this.onSubmit(event));
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("change", (event) => this.onChange(event));
    void this.navigate(parseRoute(window.location.hash));
  }

  private async navigate(route: ViewRoute): Promise<void> {
    this.route = route;
    if (route.view !== "author" && route.view !== "venue") {
      this.worksSort = "citations";
    }
    const sequence = this.state.beginRequest();
    let body: string;
    try {
      body = await this.loadBody(route);
    } catch (err) {
      if (err instanceof ApiError && err.code === "not_found") {
        body = render.renderNotFound("That page");
      } else {
        body = render.renderErrorPanel(err instanceof Error ? err.message : String(err));
      }
    }
    if (!this.state.isCurrent(sequence)) {
      return; // superseded by a newer navigation
    }
    const criterion = route.view === "search" ? route.criterion : "works";
    const query = route.view === "search" ? route.query : "";
    this.root.innerHTML =
      render.renderHeader(criterion, query, this.state.session) +
      `<main>${body}</main>`;
  }

  private async loadBody(route: ViewRoute): Promise<string> {
    switch (route.view) {
      case "home":
        return render.renderHome();
      case "search": {
        if (!route.query.trim()) return render.renderHome();
        const page = await this.api.search(
          route.criterion,
          route.query,
          route.page,
          route.sort,
        );
        return render.renderSearchResults(route, page);
      }
      case "work": {
        const work = await this.api.work(route.id);
        let tabContent: string;
        if (route.tab === "citations") {
          tabContent = render.renderWorkCitations(await this.api.workCitations(route.id));
        } else if (route.tab === "similar") {
          tabContent = render.renderWorkSimilar(await this.api.workSimilar(route.id));
        } else if (route.tab === "discussion") {
          tabContent = render.renderDiscussion(
            await this.api.comments(route.id),
            this.state.identified,
          );
        } else {
          tabContent = render.renderWorkDetails(work);
        }
        return render.renderWorkPage(work, route.tab, tabContent);
      }
      case "author": {
        const author = await this.api.author(route.id);
        let tabContent: string;
        if (route.tab === "coauthors") {
          const coauthors = await this.api.coauthors(route.id);
          tabContent = render.renderCoauthorNetwork(author, coauthors.items);
        } else if (route.tab === "focus") {
          tabContent = render.renderFocusAreas(await this.api.focus(route.id));
        } else {
          const works = await this.api.authorWorks(route.id, this.worksSort);
          tabContent = render.renderAuthorWorks(works, this.worksSort);
        }
        return render.renderAuthorPage(author, route.tab, tabContent);
      }
      case "institution": {
        const [inst, members] = await Promise.all([
          this.api.institution(route.id),
          this.api.institutionAuthors(route.id),
        ]);
        return render.renderInstitutionPage(inst, members);
      }
      case "venue": {
        const [venue, works] = await Promise.all([
          this.api.venue(route.id),
          this.api.venueWorks(route.id, this.worksSort),
        ]);
        return render.renderVenuePage(venue, works, this.worksSort);
      }
      case "path": {
        const path = await this.api.path(route.from, route.to);
        const common =
          route.from === route.to
            ? { total: 0, page: 1, items: [] }
            : await this.api.common(route.from, route.to);
        return render.renderPathView(route.from, route.to, path, common);
      }
      case "login":
        return render.renderLoginDialog(
          this.login.status,
          this.login.candidates,
          this.login.error,
        );
    }
  }

  private refresh(): void {
    void this.navigate(this.route);
  }

  private onSubmit(event: Event): void {
    const form = event.target as HTMLFormElement;
    const kind = form.dataset.form;
    if (!kind) return;
    event.preventDefault();
    const data = new FormData(form);
    if (kind === "search") {
      const query = String(data.get("q") ?? "").trim();
      if (!query) return; // blank input never submits
      const criterion = String(data.get("criterion") ?? "works");
      window.location.hash = serializeRoute({
        view: "search",
        criterion: criterion as never,
        query,
        page: 1,
        sort: "relevance",
      });
    } else if (kind === "login") {
      const name = String(data.get("name") ?? "").trim();
      const affiliation = String(data.get("affiliation") ?? "").trim() || null;
      if (!name) return;
      void this.login.submit(name, affiliation).then(() => this.refresh());
    } else if (kind === "comment" && this.route.view === "work") {
      const body = String(data.get("body") ?? "").trim();
      const token = this.state.session?.token;
      if (!body || !token) return;
      void this.api
        .postComment(this.route.id, body, token)
        .then(() => this.refresh())
        .catch(() => this.refresh());
    } else if (kind === "path") {
      const from = String(data.get("from") ?? "").trim();
      const to = String(data.get("to") ?? "").trim();
      if (from && to) {
        window.location.hash = serializeRoute({ view: "path", from, to });
      }
    }
  }

  private onClick(event: Event): void {
    const target = (event.target as HTMLElement).closest("[data-action]");
    if (!(target instanceof HTMLElement)) return;
    const action = target.dataset.action;
    if (action === "claim") {
      const authorId = target.dataset.author;
      if (!authorId) return;
      event.preventDefault();
      void this.login.choose(authorId).then((ok) => {
        if (ok) {
          this.login.cancel();
          window.location.hash = "#/";
        }
        this.refresh();
      });
    } else if (action === "sign-out") {
      event.preventDefault();
      this.state.signOut();
      this.refresh();
    } else if (action === "guest") {
      this.login.cancel();
    } else if (action === "retry") {
      event.preventDefault();
      this.refresh();
    }
  }

  private onChange(event: Event): void {
    const target = event.target as HTMLElement;
    if (
      target instanceof HTMLSelectElement &&
      target.dataset.action === "sort-works" &&
      (this.route.view === "author" || this.route.view === "venue")
    ) {
      this.worksSort = target.value as SortKey;
      this.refresh();
    }
  }
}
