import { boot } from "./app";
import "./style.css";

boot();
