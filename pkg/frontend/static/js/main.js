import { AnglerApi } from "./api.js";
import { GameClient } from "./session.js";
import { wireUi } from "./ui.js";
const client = new GameClient(new AnglerApi(""));
wireUi(client);
